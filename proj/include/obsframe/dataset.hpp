#ifndef OBSFRAME_DATASET_HPP
#define OBSFRAME_DATASET_HPP

// Dataset manifests: train/val splitting at episode granularity and
// per-task replication to balance task families.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "obsframe/episode.hpp"
#include "obsframe/error.hpp"

namespace obsframe {

enum class Split { train, val };

inline const char* to_string(Split s) { return s == Split::train ? "train" : "val"; }

inline Split parse_split(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  throw Error("bad_manifest", "unknown split '" + s + "'");
}

enum class SplitGranularity {
  /// Every view of an episode shares one split (leak-free).
  episode,
  /// Each (episode, camera) view is assigned on its own, so one trajectory
  /// may appear in both splits through different viewpoints.
  view,
};

struct ManifestEntry {
  std::string episode_id;
  std::string path;
  std::string task;
  std::int64_t steps = 0;
  std::vector<std::string> camera_ids;
  std::optional<Split> split;
  /// Populated only for view-granularity splits.
  std::map<std::string, Split> view_splits;
  std::int64_t replication = 1;

  [[nodiscard]] std::int64_t camera_count() const {
    return static_cast<std::int64_t>(camera_ids.size());
  }
  /// Camera-mode samples contributed by one copy of this episode.
  [[nodiscard]] std::int64_t samples() const { return (steps - 1) * camera_count(); }

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  SplitGranularity granularity = SplitGranularity::episode;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

struct SplitRatio {
  int train = 19;
  int val = 1;
};

inline SplitRatio parse_ratio(const std::string& s) {
  const auto colon = s.find(':');
  auto bad = [&] { return Error("bad_ratio", "ratio must look like A:B with positive integers, got '" + s + "'"); };
  if (colon == std::string::npos) throw bad();
  SplitRatio r;
  try {
    std::size_t used = 0;
    r.train = std::stoi(s.substr(0, colon), &used);
    if (used != colon) throw bad();
    const std::string rest = s.substr(colon + 1);
    r.val = std::stoi(rest, &used);
    if (used != rest.size()) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (r.train <= 0 || r.val <= 0) throw bad();
  return r;
}

inline ManifestEntry manifest_entry(const TrajectoryEpisode& e, const std::string& path) {
  ManifestEntry m;
  m.episode_id = e.episode_id;
  m.path = path;
  m.task = e.task;
  m.steps = static_cast<std::int64_t>(e.steps.size());
  for (const auto& rig : e.cameras) m.camera_ids.push_back(rig.camera_id);
  return m;
}

/// Loads and validates every episode file; entries follow path order.
inline DatasetManifest build_manifest(const std::vector<std::filesystem::path>& paths) {
  DatasetManifest m;
  for (const auto& p : paths) m.entries.push_back(manifest_entry(load_episode(p), p.string()));
  return m;
}

inline std::vector<Violation> validate_manifest(const DatasetManifest& m) {
  std::vector<Violation> out;
  std::set<std::string> ids;
  for (const auto& e : m.entries) {
    if (!ids.insert(e.episode_id).second) {
      out.push_back({"duplicate_episode_id", e.episode_id});
    }
    if (e.replication < 1) out.push_back({"replication_below_one", e.episode_id});
    if (m.granularity == SplitGranularity::episode && !e.split) {
      out.push_back({"unassigned_split", e.episode_id});
    }
    if (m.granularity == SplitGranularity::view && e.view_splits.size() != e.camera_ids.size()) {
      out.push_back({"unassigned_view_split", e.episode_id});
    }
  }
  return out;
}

namespace detail {

/// Fisher-Yates with a plain modulo draw so the permutation is identical
/// across standard library implementations.
template <class T>
void portable_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

inline std::size_t val_count(std::size_t n, const SplitRatio& r) {
  const double exact = static_cast<double>(n) * r.val / (r.train + r.val);
  const auto v = static_cast<std::size_t>(std::llround(exact));
  return std::clamp<std::size_t>(v, 1, n - 1);
}

}  // namespace detail

/// Assigns train/val. With `stratify`, every task with at least two units is
/// represented in both splits. Deterministic for a given seed.
inline DatasetManifest split_dataset(DatasetManifest m, const SplitRatio& ratio,
                                     std::uint64_t seed, bool stratify = false,
                                     SplitGranularity granularity = SplitGranularity::episode) {
  if (ratio.train <= 0 || ratio.val <= 0) throw Error("bad_ratio", "split ratio parts must be positive");
  m.granularity = granularity;

  // A unit is an episode, or an (episode, camera) pair at view granularity.
  struct Unit {
    std::size_t entry;
    std::size_t camera;
  };
  std::map<std::string, std::vector<Unit>> groups;
  std::size_t total = 0;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    auto& e = m.entries[i];
    e.split.reset();
    e.view_splits.clear();
    const std::string key = stratify ? e.task : std::string();
    if (granularity == SplitGranularity::episode) {
      groups[key].push_back({i, 0});
      ++total;
    } else {
      for (std::size_t c = 0; c < e.camera_ids.size(); ++c) groups[key].push_back({i, c});
      total += e.camera_ids.size();
    }
  }
  if (total < 2) {
    throw Error("ratio_unsatisfiable",
                "cannot split " + std::to_string(total) + " unit(s) into non-empty train and val sets");
  }

  std::mt19937_64 rng(seed);
  std::size_t total_val = 0;
  for (auto& [task, units] : groups) {
    detail::portable_shuffle(units, rng);
    const std::size_t n_val = units.size() >= 2 ? detail::val_count(units.size(), ratio) : 0;
    total_val += n_val;
    for (std::size_t k = 0; k < units.size(); ++k) {
      const Split s = k < n_val ? Split::val : Split::train;
      auto& e = m.entries[units[k].entry];
      if (granularity == SplitGranularity::episode) {
        e.split = s;
      } else {
        e.view_splits[e.camera_ids[units[k].camera]] = s;
      }
    }
  }
  if (total_val == 0) {
    throw Error("ratio_unsatisfiable", "no task has enough units to populate the val split");
  }
  return m;
}

/// Effective train samples contributed by an entry (all samples when the
/// manifest carries no split yet).
inline std::int64_t effective_train_samples(const ManifestEntry& e, bool has_split,
                                            SplitGranularity g) {
  if (!has_split) return e.replication * e.samples();
  if (g == SplitGranularity::episode) {
    return e.split == Split::train ? e.replication * e.samples() : 0;
  }
  std::int64_t views = 0;
  for (const auto& [cam, s] : e.view_splits) views += s == Split::train;
  return e.replication * (e.steps - 1) * views;
}

inline bool manifest_has_split(const DatasetManifest& m) {
  return std::any_of(m.entries.begin(), m.entries.end(),
                     [](const ManifestEntry& e) { return e.split || !e.view_splits.empty(); });
}

inline std::map<std::string, std::int64_t> task_sample_counts(const DatasetManifest& m) {
  const bool has_split = manifest_has_split(m);
  std::map<std::string, std::int64_t> counts;
  for (const auto& e : m.entries) {
    counts[e.task] += effective_train_samples(e, has_split, m.granularity);
  }
  return counts;
}

/// Replicates episodes of under-represented tasks until every task's
/// effective training sample count is within one episode of the largest.
/// Only training episodes are replicated once a split exists.
inline DatasetManifest balance_tasks(DatasetManifest m) {
  const bool has_split = manifest_has_split(m);
  for (auto& e : m.entries) e.replication = 1;
  const auto counts = task_sample_counts(m);
  std::int64_t target = 0;
  for (const auto& [task, c] : counts) target = std::max(target, c);

  for (const auto& [task, start] : counts) {
    std::vector<ManifestEntry*> members;
    for (auto& e : m.entries) {
      if (e.task == task && effective_train_samples(e, has_split, m.granularity) > 0) {
        members.push_back(&e);
      }
    }
    std::int64_t count = start;
    // Round-robin one extra copy at a time while it still fits under target.
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (ManifestEntry* e : members) {
        const std::int64_t per_copy =
            effective_train_samples(*e, has_split, m.granularity) / e->replication;
        if (count + per_copy <= target) {
          ++e->replication;
          count += per_copy;
          progressed = true;
        }
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline constexpr const char* kManifestSchema = "obsframe.manifest/1";

inline nlohmann::json to_json(const DatasetManifest& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries) {
    nlohmann::json j = {{"episode_id", e.episode_id},
                        {"path", e.path},
                        {"task", e.task},
                        {"steps", e.steps},
                        {"camera_ids", e.camera_ids},
                        {"split", e.split ? nlohmann::json(to_string(*e.split)) : nlohmann::json(nullptr)},
                        {"replication", e.replication}};
    if (!e.view_splits.empty()) {
      nlohmann::json vs = nlohmann::json::object();
      for (const auto& [cam, s] : e.view_splits) vs[cam] = to_string(s);
      j["view_splits"] = vs;
    }
    entries.push_back(std::move(j));
  }
  return {{"schema", kManifestSchema},
          {"granularity", m.granularity == SplitGranularity::episode ? "episode" : "view"},
          {"episodes", entries}};
}

inline DatasetManifest manifest_from_json(const nlohmann::json& j) {
  if (j.value("schema", std::string()) != kManifestSchema) {
    throw Error("bad_manifest", "manifest has unexpected schema");
  }
  DatasetManifest m;
  const std::string g = j.value("granularity", std::string("episode"));
  if (g == "episode") {
    m.granularity = SplitGranularity::episode;
  } else if (g == "view") {
    m.granularity = SplitGranularity::view;
  } else {
    throw Error("bad_manifest", "unknown granularity '" + g + "'");
  }
  for (const auto& je : j.at("episodes")) {
    ManifestEntry e;
    e.episode_id = je.at("episode_id").get<std::string>();
    e.path = je.at("path").get<std::string>();
    e.task = je.at("task").get<std::string>();
    e.steps = je.at("steps").get<std::int64_t>();
    e.camera_ids = je.at("camera_ids").get<std::vector<std::string>>();
    if (!je.at("split").is_null()) e.split = parse_split(je.at("split").get<std::string>());
    if (je.contains("view_splits")) {
      for (const auto& [cam, s] : je.at("view_splits").items()) {
        e.view_splits[cam] = parse_split(s.get<std::string>());
      }
    }
    e.replication = je.value("replication", std::int64_t{1});
    m.entries.push_back(std::move(e));
  }
  return m;
}

inline DatasetManifest read_manifest_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("io_error", "cannot open manifest " + p.string());
  try {
    return manifest_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad_manifest", p.string() + ": " + e.what());
  }
}

inline void write_manifest_file(const std::filesystem::path& p, const DatasetManifest& m) {
  std::ofstream out(p);
  if (!out) throw Error("io_error", "cannot write manifest " + p.string());
  out << to_json(m).dump(2) << '\n';
}

}  // namespace obsframe

#endif  // OBSFRAME_DATASET_HPP
