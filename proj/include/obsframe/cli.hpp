#ifndef OBSFRAME_CLI_HPP
#define OBSFRAME_CLI_HPP

// Command-line front end. Data goes to files, logs to stderr, and stdout
// carries one JSON summary line per successful command.
//
// Exit codes: 0 success, 1 validation/processing failure, 2 usage error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "obsframe/bench.hpp"
#include "obsframe/dataset.hpp"
#include "obsframe/episode.hpp"
#include "obsframe/pipeline.hpp"
#include "obsframe/synthetic.hpp"

namespace obsframe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kVersion = "obsframe 1.0 (flag grammar v1)";

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& msg) : Error("usage", msg) {}
};

struct Logger {
  std::ostream* err = &std::cerr;
  int verbosity = 0;

  void info(const std::string& msg) const {
    if (verbosity >= 1) *err << "[info] " << msg << '\n';
  }
  void warn(const std::string& msg) const { *err << "[warn] " << msg << '\n'; }
  void error(const std::string& msg) const { *err << "error: " << msg << '\n'; }
};

// ---------------------------------------------------------------------------
// Subcommand option blocks
// ---------------------------------------------------------------------------

struct ConvertArgs {
  std::string input, output, frame = "camera", stats, stats_out;
  bool discrete = false, fit_stats = false, timestamp = false;
  int bins = 256;
  double q_low = 0.01, q_high = 0.99;
  unsigned jobs = 1;
};

struct ValidateArgs {
  std::string input;
};

struct SplitArgs {
  std::string input, output, ratio = "19:1";
  std::uint64_t seed = 0;
  bool stratify = false, view_level = false;
};

struct BalanceArgs {
  std::string input, output;
};

struct RoundtripArgs {
  std::size_t samples = 100000;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

struct BenchArgs {
  std::string config, output, table;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct GenArgs {
  std::string output;
  int pool = 512, episodes = 200, views = 20, steps = 24;
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline std::filesystem::path require_path(const std::string& p, const char* flag) {
  if (!std::filesystem::exists(p)) {
    throw UsageError(std::string(flag) + ": path '" + p + "' does not exist");
  }
  return p;
}

inline std::vector<TrajectoryEpisode> load_all(const std::filesystem::path& input,
                                               const Logger& log) {
  std::vector<TrajectoryEpisode> out;
  for (const auto& p : list_episode_files(input)) {
    out.push_back(load_episode(p));
    log.info("loaded " + p.string());
  }
  if (out.empty()) throw UsageError("--input: no *.jsonl episode files found in " + input.string());
  return out;
}

inline int cmd_convert(const ConvertArgs& a, std::ostream& out, const Logger& log) {
  if (!a.discrete && (a.fit_stats || !a.stats.empty())) {
    throw UsageError("--stats/--fit-stats only apply with --discrete");
  }
  if (a.discrete && a.fit_stats == !a.stats.empty()) {
    throw UsageError("--discrete requires exactly one of --stats PATH or --fit-stats");
  }
  const auto input = require_path(a.input, "--input");
  ConvertOptions opt;
  opt.frame = parse_frame(a.frame);
  opt.codec.discrete = a.discrete;
  opt.codec.bins.bins_per_dimension = a.bins;
  opt.fit_stats = a.fit_stats;
  opt.q_low = a.q_low;
  opt.q_high = a.q_high;
  opt.jobs = a.jobs;
  if (!a.stats.empty()) opt.codec.stats = read_stats_file(require_path(a.stats, "--stats"));

  const auto episodes = load_all(input, log);
  ConvertResult r = convert_episodes(episodes, opt);

  const std::filesystem::path out_path(a.output);
  {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw UsageError("--output: cannot write '" + a.output + "'");
    write_samples(os, r);
  }
  std::size_t count = 0;
  for (const auto& per : r.samples) count += per.size();
  nlohmann::json summary = {{"command", "convert"},
                            {"episodes", episodes.size()},
                            {"samples", count},
                            {"frame", a.frame},
                            {"output", a.output}};
  if (a.fit_stats) {
    std::filesystem::path stats_path =
        a.stats_out.empty() ? out_path.parent_path() / (out_path.stem().string() + ".stats.json")
                            : std::filesystem::path(a.stats_out);
    if (a.timestamp) {
      r.stats->created_unix = std::chrono::duration_cast<std::chrono::seconds>(
                                  std::chrono::system_clock::now().time_since_epoch())
                                  .count();
    }
    write_stats_file(stats_path, *r.stats);
    summary["stats"] = stats_path.string();
  }
  log.info("wrote " + std::to_string(count) + " samples to " + a.output);
  out << summary.dump() << '\n';
  return kExitOk;
}

inline int cmd_validate(const ValidateArgs& a, std::ostream& out, const Logger& log) {
  const auto input = require_path(a.input, "--input");
  std::size_t ok = 0, bad = 0;
  const auto files = list_episode_files(input);
  for (const auto& p : files) {
    std::vector<Violation> v;
    try {
      v = validate_episode(parse_episode_file(p));
    } catch (const Error& e) {
      v.push_back({e.code(), e.what()});
    }
    if (v.empty()) {
      ++ok;
      log.info(p.string() + ": ok");
    } else {
      ++bad;
      log.error(p.string() + ": " + format_violations(v));
    }
  }
  out << nlohmann::json{{"command", "validate"}, {"files", files.size()}, {"valid", ok},
                        {"invalid", bad}}
             .dump()
      << '\n';
  return bad == 0 && !files.empty() ? kExitOk : kExitFailure;
}

inline DatasetManifest manifest_input(const std::string& input) {
  const auto p = require_path(input, "--input");
  if (!std::filesystem::is_directory(p) && p.extension() == ".json") return read_manifest_file(p);
  return build_manifest(list_episode_files(p));
}

inline nlohmann::json split_counts(const DatasetManifest& m) {
  std::size_t train = 0, val = 0;
  for (const auto& e : m.entries) {
    if (e.split) {
      (*e.split == Split::train ? train : val)++;
    }
    for (const auto& [cam, s] : e.view_splits) (s == Split::train ? train : val)++;
  }
  return {{"train", train}, {"val", val}};
}

inline int cmd_split(const SplitArgs& a, std::ostream& out, const Logger& log) {
  const SplitRatio ratio = parse_ratio(a.ratio);
  DatasetManifest m = manifest_input(a.input);
  m = split_dataset(std::move(m), ratio, a.seed, a.stratify,
                    a.view_level ? SplitGranularity::view : SplitGranularity::episode);
  write_manifest_file(a.output, m);
  log.info("wrote manifest " + a.output);
  nlohmann::json summary = {{"command", "split"},
                            {"unit", a.view_level ? "view" : "episode"},
                            {"output", a.output}};
  summary.update(split_counts(m));
  out << summary.dump() << '\n';
  return kExitOk;
}

inline int cmd_balance(const BalanceArgs& a, std::ostream& out, const Logger& log) {
  DatasetManifest m = balance_tasks(manifest_input(a.input));
  write_manifest_file(a.output, m);
  log.info("wrote manifest " + a.output);
  out << nlohmann::json{{"command", "balance"},
                        {"task_samples", task_sample_counts(m)},
                        {"output", a.output}}
             .dump()
      << '\n';
  return kExitOk;
}

struct RoundtripStats {
  double max_translation_error = 0.0;
  double max_rotation_error = 0.0;
  double seconds = 0.0;
};

/// Random unit-ish rigid transform: uniform rotation, translation in a cube.
inline Mat3 random_rotation(std::mt19937_64& rng) {
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  return q.normalized().toRotationMatrix();
}

/// camera -> base -> camera on random (action, extrinsic) pairs.
inline RoundtripStats run_roundtrip(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RoundtripStats st;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < samples; ++i) {
    const Transform t{random_rotation(rng),
                      Vec3(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2))};
    const ActionMatrix a_cam{random_rotation(rng), Vec3(uniform(rng, -0.5, 0.5),
                                                        uniform(rng, -0.5, 0.5),
                                                        uniform(rng, -0.5, 0.5))};
    const ActionMatrix back = conjugate_action(t, inverse_conjugate_action(t, a_cam));
    st.max_translation_error = std::max(st.max_translation_error,
                                        (back.translation - a_cam.translation).norm());
    st.max_rotation_error = std::max(
        st.max_rotation_error, rotation_angle(back.rotation.transpose() * a_cam.rotation));
  }
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return st;
}

inline int cmd_roundtrip(const RoundtripArgs& a, std::ostream& out, const Logger& log) {
  const RoundtripStats st = run_roundtrip(a.samples, a.seed);
  const bool pass = st.max_translation_error < a.tol && st.max_rotation_error < a.tol;
  if (!pass) log.error("round-trip error exceeds tolerance");
  out << nlohmann::json{{"command", "roundtrip"},
                        {"samples", a.samples},
                        {"max_translation_error_m", st.max_translation_error},
                        {"max_rotation_error_rad", st.max_rotation_error},
                        {"tol", a.tol},
                        {"seconds", st.seconds},
                        {"pass", pass}}
             .dump()
      << '\n';
  return pass ? kExitOk : kExitFailure;
}

inline int cmd_bench(const BenchArgs& a, std::ostream& out, const Logger& log) {
  nlohmann::json cfg_json = nlohmann::json::object();
  if (!a.config.empty()) {
    std::ifstream in(require_path(a.config, "--config"));
    try {
      cfg_json = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("--config: " + std::string(e.what()));
    }
  }
  std::size_t seed_count = 10;
  if (cfg_json.contains("seed_count")) {
    seed_count = cfg_json["seed_count"].get<std::size_t>();
    cfg_json.erase("seed_count");
  }
  if (cfg_json.contains("seeds")) throw UsageError("--config: use 'seed_count' with --seed, not 'seeds'");
  BenchConfig cfg = bench_config_from_json(cfg_json);
  if (cfg.identity_control) cfg = identity_control_config(cfg);
  cfg.seeds.clear();
  for (std::size_t i = 0; i < seed_count; ++i) cfg.seeds.push_back(a.seed + i);
  if (a.jobs > 0) cfg.jobs = a.jobs;

  const BenchReport report = run_benchmark(cfg);
  nlohmann::json doc = to_json(report);
  doc["config"] = to_json(cfg);
  if (!cfg.identity_control) {
    const WitnessResult w = well_posedness_witness(cfg, a.seed);
    doc["witness"] = {{"samples", w.samples},
                      {"views", w.views},
                      {"base_conflicts", w.base_conflicts},
                      {"camera_conflicts", w.camera_conflicts}};
  }
  const std::string table = format_table(report);
  if (!a.output.empty()) {
    std::ofstream os(a.output);
    if (!os) throw UsageError("--output: cannot write '" + a.output + "'");
    os << doc.dump(2) << '\n';
  }
  if (!a.table.empty()) {
    std::ofstream os(a.table);
    if (!os) throw UsageError("--table: cannot write '" + a.table + "'");
    os << table;
  }
  log.info("\n" + table);
  nlohmann::json summary = {{"command", "bench"},
                            {"seeds", report.seeds.size()},
                            {"camera_wins", doc["camera_wins"]}};
  if (doc.contains("witness")) summary["witness"] = doc["witness"];
  out << summary.dump() << '\n';
  return kExitOk;
}

inline int cmd_gen_synthetic(const GenArgs& a, std::ostream& out, const Logger& log) {
  if (a.views < 1 || a.views > a.pool) throw UsageError("--views must lie in [1, --pool]");
  if (a.episodes < 1) throw UsageError("--episodes must be >= 1");
  namespace fs = std::filesystem;
  fs::create_directories(a.output);
  CameraPoolSpec ps;
  ps.pool_size = a.pool;
  ps.seed = mix_seed(a.seed, 1);
  const auto pool = sample_camera_pool(ps);
  SyntheticTaskSpec task;
  task.steps = a.steps;
  for (int i = 0; i < a.episodes; ++i) {
    task.family = (i % 2 == 0) ? MotionFamily::reach : MotionFamily::reach_grasp_lift;
    SyntheticEpisode se = gen_trajectory(task, mix_seed(a.seed, 100 + static_cast<std::uint64_t>(i)));
    char name[32];
    std::snprintf(name, sizeof(name), "episode_%05d", i);
    se.episode.episode_id = name;
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::mt19937_64 rng(mix_seed(a.seed, 1'000'000 + static_cast<std::uint64_t>(i)));
    detail::portable_shuffle(idx, rng);
    for (int k = 0; k < a.views; ++k) se.episode.cameras.push_back(pool[idx[static_cast<std::size_t>(k)]]);
    write_episode_file(fs::path(a.output) / (std::string(name) + ".jsonl"), se.episode);
  }
  log.info("wrote " + std::to_string(a.episodes) + " episodes to " + a.output);
  out << nlohmann::json{{"command", "gen-synthetic"},
                        {"episodes", a.episodes},
                        {"views", a.views},
                        {"pool", a.pool},
                        {"output", a.output}}
             .dump()
      << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Observation-centric action conversion for multi-view robot datasets", "obsframe"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.set_help_all_flag("--help-all", "Print help for every subcommand and exit");
  Logger log{&err, 0};
  app.add_flag("-v,--verbose", log.verbosity, "Increase log verbosity (repeatable)");

  ConvertArgs ca;
  auto* convert = app.add_subcommand("convert", "Convert episodes into training samples");
  convert->add_option("--input", ca.input, "Episode file or directory of *.jsonl episodes")->required();
  convert->add_option("--output", ca.output, "Samples output file (.jsonl)")->required();
  convert->add_option("--frame", ca.frame, "Target frame")->check(CLI::IsMember({"base", "camera"}));
  convert->add_flag("--discrete", ca.discrete, "Attach quantized action tokens");
  convert->add_option("--bins", ca.bins, "Bins per action dimension")->check(CLI::Range(2, 1 << 20));
  convert->add_option("--stats", ca.stats, "Normalization stats JSON to reuse (discrete mode)");
  convert->add_flag("--fit-stats", ca.fit_stats, "Fit normalization stats from the converted data");
  convert->add_option("--stats-out", ca.stats_out,
                      "Where --fit-stats writes stats (default: <output stem>.stats.json)");
  convert->add_option("--q-low", ca.q_low, "Lower quantile for --fit-stats")->check(CLI::Range(0.0, 1.0));
  convert->add_option("--q-high", ca.q_high, "Upper quantile for --fit-stats")->check(CLI::Range(0.0, 1.0));
  convert->add_flag("--timestamp", ca.timestamp, "Record wall-clock creation time in fitted stats");
  convert->add_option("--jobs", ca.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Validate episode files and their camera rigs");
  validate->add_option("--input", va.input, "Episode file or directory")->required();

  SplitArgs sa;
  auto* split = app.add_subcommand("split", "Assign episodes to train/val splits");
  split->add_option("--input", sa.input, "Episode directory or manifest .json")->required();
  split->add_option("--output", sa.output, "Manifest output (.json)")->required();
  split->add_option("--ratio", sa.ratio, "train:val ratio as integers A:B");
  split->add_option("--seed", sa.seed, "Shuffle seed")->required();
  split->add_flag("--stratify", sa.stratify, "Represent every task in both splits");
  split->add_flag("--view-level", sa.view_level,
                  "Split (episode, camera) views independently instead of whole episodes");

  BalanceArgs ba;
  auto* balance = app.add_subcommand("balance", "Replicate episodes of under-represented tasks");
  balance->add_option("--input", ba.input, "Manifest .json or episode directory")->required();
  balance->add_option("--output", ba.output, "Manifest output (.json)")->required();

  RoundtripArgs ra;
  auto* roundtrip = app.add_subcommand("roundtrip", "Self-check camera->base->camera transforms");
  roundtrip->add_option("--samples", ra.samples, "Random (action, extrinsic) pairs");
  roundtrip->add_option("--tol", ra.tol, "Max tolerated translation (m) and rotation (rad) error");
  roundtrip->add_option("--seed", ra.seed, "RNG seed");

  BenchArgs bea;
  auto* bench = app.add_subcommand("bench", "Run the synthetic multi-view benchmark");
  bench->add_option("--config", bea.config, "Bench config JSON (every field optional)");
  bench->add_option("--seed", bea.seed, "First seed; seeds are seed..seed+seed_count-1")->required();
  bench->add_option("--output", bea.output, "Report JSON path");
  bench->add_option("--table", bea.table, "Plain-text table path");
  bench->add_option("--jobs", bea.jobs, "Seeds evaluated in parallel")->check(CLI::Range(1u, 1024u));

  GenArgs ga;
  auto* gen = app.add_subcommand("gen-synthetic", "Write synthetic multi-view episodes");
  gen->add_option("--output", ga.output, "Output directory")->required();
  gen->add_option("--pool", ga.pool, "Camera pool size")->check(CLI::Range(1, 10'000'000));
  gen->add_option("--episodes", ga.episodes, "Number of episodes");
  gen->add_option("--views", ga.views, "Cameras sampled from the pool per episode");
  gen->add_option("--steps", ga.steps, "Steps per episode")->check(CLI::Range(3, 100000));
  gen->add_option("--seed", ga.seed, "Generation seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    log.error(e.what());
    return kExitUsage;
  }

  try {
    if (*convert) return cmd_convert(ca, out, log);
    if (*validate) return cmd_validate(va, out, log);
    if (*split) return cmd_split(sa, out, log);
    if (*balance) return cmd_balance(ba, out, log);
    if (*roundtrip) return cmd_roundtrip(ra, out, log);
    if (*bench) return cmd_bench(bea, out, log);
    if (*gen) return cmd_gen_synthetic(ga, out, log);
  } catch (const UsageError& e) {
    log.error(e.what());
    return kExitUsage;
  } catch (const Error& e) {
    log.error(e.what());
    return e.code() == "bad_ratio" || e.code() == "bad_frame" || e.code() == "io_error" ||
                   e.code() == "bad_config"
               ? kExitUsage
               : kExitFailure;
  } catch (const std::exception& e) {
    log.error(e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace obsframe::cli

#endif  // OBSFRAME_CLI_HPP
