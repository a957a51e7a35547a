#ifndef OBSFRAME_PIPELINE_HPP
#define OBSFRAME_PIPELINE_HPP

// Episode -> training samples. The training direction derives world deltas
// from consecutive base-frame poses and re-expresses them in every camera of
// the episode; the inference direction maps a camera-frame prediction back to
// the robot base.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "obsframe/action_codec.hpp"
#include "obsframe/episode.hpp"
#include "obsframe/se3.hpp"

namespace obsframe {

enum class Frame { base, camera };

inline const char* to_string(Frame f) { return f == Frame::base ? "base" : "camera"; }

inline Frame parse_frame(const std::string& s) {
  if (s == "base") return Frame::base;
  if (s == "camera") return Frame::camera;
  throw Error("bad_frame", "frame must be 'base' or 'camera', got '" + s + "'");
}

struct WorldAction {
  ActionMatrix action;
  double gripper = 0.0;
};

/// N-1 deltas for N steps: action[i] = pose[i+1] * pose[i]^-1, carrying the
/// gripper of step i+1 (the commanded next state).
inline std::vector<WorldAction> derive_world_actions(const TrajectoryEpisode& e) {
  std::vector<WorldAction> out;
  if (e.steps.size() < 2) return out;
  out.reserve(e.steps.size() - 1);
  for (std::size_t i = 0; i + 1 < e.steps.size(); ++i) {
    out.push_back({action_from_pose_pair(e.steps[i].pose_base, e.steps[i + 1].pose_base),
                   e.steps[i + 1].gripper});
  }
  return out;
}

struct CodecConfig {
  bool discrete = false;
  std::optional<NormalizationStats> stats;
  BinConfig bins;
};

struct TrainingSample {
  std::string episode_id;
  /// Empty in base mode.
  std::optional<std::string> camera_id;
  std::int64_t step_index = 0;
  Frame frame = Frame::camera;
  ActionVector7 action7;
  std::optional<ActionTokens> tokens;
  std::string observation_ref;

  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

inline ActionTokens tokenize(const ActionVector7& v, const NormalizationStats& s,
                             const BinConfig& bins) {
  return quantize(normalize(v, s), bins);
}

inline void check_stats_for(const NormalizationStats& s, Frame frame) {
  if (s.frame != to_string(frame)) {
    throw Error("stats_frame_mismatch", "normalization stats were fit in the '" + s.frame +
                                            "' frame but samples are in the '" +
                                            to_string(frame) + "' frame");
  }
  const auto bad = validate_stats(s);
  if (!bad.empty()) throw Error("invalid_stats", "normalization stats invalid: " + bad.front());
}

inline std::string observation_ref(const std::string& episode_id,
                                   const std::optional<std::string>& camera_id,
                                   std::int64_t step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06lld", static_cast<long long>(step));
  return episode_id + "/" + (camera_id ? *camera_id : std::string("base")) + "/" + buf;
}

/// Camera mode emits (N-1)*K samples ordered camera-major; base mode emits
/// N-1. In discrete mode every sample also carries tokens.
inline std::vector<TrainingSample> expand_to_camera_targets(const TrajectoryEpisode& e,
                                                            Frame frame,
                                                            const CodecConfig& codec) {
  const auto violations = validate_episode(e);
  if (!violations.empty()) {
    throw Error(violations.front().code,
                "episode '" + e.episode_id + "': " + format_violations(violations));
  }
  if (codec.discrete) {
    if (!codec.stats) throw Error("missing_stats", "discrete mode requires normalization stats");
    check_stats_for(*codec.stats, frame);
    require_bins(codec.bins);
  }
  const auto world = derive_world_actions(e);
  std::vector<TrainingSample> out;

  auto emit = [&](std::optional<std::string> cam, std::size_t i, const ActionMatrix& a) {
    TrainingSample s;
    s.episode_id = e.episode_id;
    s.camera_id = std::move(cam);
    s.step_index = e.steps[i].index;
    s.frame = frame;
    s.action7 = encode_action(a, world[i].gripper);
    if (codec.discrete) s.tokens = tokenize(s.action7, *codec.stats, codec.bins);
    s.observation_ref = observation_ref(s.episode_id, s.camera_id, s.step_index);
    out.push_back(std::move(s));
  };

  if (frame == Frame::base) {
    out.reserve(world.size());
    for (std::size_t i = 0; i < world.size(); ++i) emit(std::nullopt, i, world[i].action);
    return out;
  }
  out.reserve(world.size() * e.cameras.size());
  for (const CameraRig& rig : e.cameras) {
    for (std::size_t i = 0; i < world.size(); ++i) {
      emit(rig.camera_id, i, conjugate_action(rig.extrinsics, world[i].action));
    }
  }
  return out;
}

/// Inference direction: camera-frame action7 -> robot-base action7.
inline ActionVector7 recover_world_action(const ActionVector7& v_cam, const Transform& t) {
  const DecodedAction d = decode_action(v_cam);
  return encode_action(inverse_conjugate_action(t, d.action), d.gripper);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const TrainingSample& s) {
  const Vec7 a = s.action7.to_array();
  nlohmann::json j = {{"episode_id", s.episode_id},
                      {"camera_id", s.camera_id ? nlohmann::json(*s.camera_id) : nlohmann::json(nullptr)},
                      {"step_index", s.step_index},
                      {"frame", to_string(s.frame)},
                      {"action7", a},
                      {"observation_ref", s.observation_ref}};
  if (s.tokens) j["tokens"] = *s.tokens;
  return j;
}

inline TrainingSample sample_from_json(const nlohmann::json& j) {
  TrainingSample s;
  s.episode_id = j.at("episode_id").get<std::string>();
  if (!j.at("camera_id").is_null()) s.camera_id = j.at("camera_id").get<std::string>();
  s.step_index = j.at("step_index").get<std::int64_t>();
  s.frame = parse_frame(j.at("frame").get<std::string>());
  s.action7 = ActionVector7::from_array(j.at("action7").get<Vec7>());
  if (j.contains("tokens")) s.tokens = j.at("tokens").get<ActionTokens>();
  s.observation_ref = j.at("observation_ref").get<std::string>();
  return s;
}

inline std::vector<TrainingSample> read_samples_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open samples file " + path.string());
  std::vector<TrainingSample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(sample_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

inline constexpr const char* kStatsSchema = "obsframe.stats/1";

inline nlohmann::json to_json(const NormalizationStats& s) {
  return {{"schema", kStatsSchema},
          {"dimensions", {"x", "y", "z", "roll", "pitch", "yaw", "gripper"}},
          {"lower", s.lower},
          {"upper", s.upper},
          {"q_low", s.q_low},
          {"q_high", s.q_high},
          {"sample_count", s.sample_count},
          {"frame", s.frame},
          {"created_unix", s.created_unix}};
}

inline NormalizationStats stats_from_json(const nlohmann::json& j) {
  NormalizationStats s;
  if (j.value("schema", std::string()) != kStatsSchema) {
    throw Error("bad_stats", "stats document has unexpected schema");
  }
  const auto& lo = j.at("lower");
  const auto& hi = j.at("upper");
  if (!lo.is_array() || !hi.is_array() || lo.size() != kActionDims || hi.size() != kActionDims) {
    throw Error("bad_stats", "stats bounds must have exactly 7 entries");
  }
  s.lower = lo.get<Vec7>();
  s.upper = hi.get<Vec7>();
  s.q_low = j.at("q_low").get<double>();
  s.q_high = j.at("q_high").get<double>();
  s.sample_count = j.at("sample_count").get<std::uint64_t>();
  s.frame = j.at("frame").get<std::string>();
  s.created_unix = j.value("created_unix", std::int64_t{0});
  return s;
}

inline NormalizationStats read_stats_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open stats file " + path.string());
  try {
    return stats_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad_stats", path.string() + ": " + e.what());
  }
}

inline void write_stats_file(const std::filesystem::path& path, const NormalizationStats& s) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write stats file " + path.string());
  out << to_json(s).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Batch conversion
// ---------------------------------------------------------------------------

struct ConvertOptions {
  Frame frame = Frame::camera;
  CodecConfig codec;
  /// Discrete mode only: fit stats from the converted data instead of
  /// requiring codec.stats.
  bool fit_stats = false;
  double q_low = 0.01;
  double q_high = 0.99;
  unsigned jobs = 1;
};

struct ConvertResult {
  /// One entry per input episode, in input order.
  std::vector<std::vector<TrainingSample>> samples;
  std::optional<NormalizationStats> stats;
};

/// Runs fn(i) for i in [0, n) on `jobs` threads. The first exception thrown
/// by any worker is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first) std::rethrow_exception(first);
}

/// Converts episodes independently; output order follows input order so the
/// result is identical for any `jobs`.
inline ConvertResult convert_episodes(const std::vector<TrajectoryEpisode>& episodes,
                                      const ConvertOptions& opt) {
  ConvertResult result;
  result.samples.resize(episodes.size());
  CodecConfig first_pass = opt.codec;
  const bool fit = opt.codec.discrete && opt.fit_stats;
  if (fit) first_pass.discrete = false;
  parallel_for(episodes.size(), opt.jobs, [&](std::size_t i) {
    result.samples[i] = expand_to_camera_targets(episodes[i], opt.frame, first_pass);
  });
  if (fit) {
    std::vector<ActionVector7> all;
    for (const auto& per_episode : result.samples) {
      for (const auto& s : per_episode) all.push_back(s.action7);
    }
    result.stats = fit_normalization(all, opt.q_low, opt.q_high, to_string(opt.frame));
    parallel_for(result.samples.size(), opt.jobs, [&](std::size_t i) {
      for (auto& s : result.samples[i]) {
        s.tokens = tokenize(s.action7, *result.stats, opt.codec.bins);
      }
    });
  } else if (opt.codec.discrete) {
    result.stats = opt.codec.stats;
  }
  return result;
}

inline void write_samples(std::ostream& out, const ConvertResult& r) {
  for (const auto& per_episode : r.samples) {
    for (const auto& s : per_episode) out << to_json(s).dump() << '\n';
  }
}

}  // namespace obsframe

#endif  // OBSFRAME_PIPELINE_HPP
