#ifndef OBSFRAME_BENCH_HPP
#define OBSFRAME_BENCH_HPP

// Controlled multi-view learning benchmark. Two ridge regressors with the
// same features and the same observations are trained per seed: one on
// robot-base targets and one on camera-frame targets. Both are scored in the
// robot base frame (camera predictions are mapped back with the rig's
// calibration) on seen, perturbed and novel viewpoints.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "obsframe/dataset.hpp"
#include "obsframe/pipeline.hpp"
#include "obsframe/regressor.hpp"
#include "obsframe/synthetic.hpp"

namespace obsframe {

struct BenchConfig {
  CameraPoolSpec pool;
  SyntheticTaskSpec task;
  int train_views = 16;
  int novel_views = 4;
  int train_episodes = 48;
  int val_episodes = 16;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  double lambda = 1e-6;
  /// Append a one-hot training-view id to every observation.
  bool view_onehot = false;
  double perturb_rotation_deg = 2.0;
  double perturb_translation_m = 0.02;
  /// Degenerate control: a single camera with identity extrinsics.
  bool identity_control = false;
  unsigned jobs = 1;
};

enum class Condition { seen, perturbed, novel };
inline constexpr std::array<Condition, 3> kConditions{Condition::seen, Condition::perturbed,
                                                      Condition::novel};

inline const char* to_string(Condition c) {
  switch (c) {
    case Condition::seen: return "seen";
    case Condition::perturbed: return "perturbed";
    case Condition::novel: return "novel";
  }
  return "?";
}

struct ArmScores {
  double base_mse = 0.0;
  double camera_mse = 0.0;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::array<ArmScores, 3> by_condition{};
};

struct BenchReport {
  std::vector<SeedResult> seeds;

  /// Seeds where the camera-frame arm has strictly lower MSE.
  [[nodiscard]] int camera_wins(Condition c) const {
    int wins = 0;
    for (const auto& s : seeds) {
      const auto& a = s.by_condition[static_cast<std::size_t>(c)];
      wins += a.camera_mse < a.base_mse;
    }
    return wins;
  }
};

/// splitmix64 finalizer; derives independent sub-seeds from (seed, stream).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Small rigid jitter applied in the camera frame: T' = J * T.
inline Transform jitter_extrinsics(const Transform& t, double max_rot_rad, double max_trans_m,
                                   std::mt19937_64& rng) {
  Vec3 axis(normal(rng), normal(rng), normal(rng));
  axis.normalize();
  const double angle = uniform(rng, -max_rot_rad, max_rot_rad);
  const Transform j{Eigen::AngleAxisd(angle, axis).toRotationMatrix(),
                    Vec3(uniform(rng, -max_trans_m, max_trans_m),
                         uniform(rng, -max_trans_m, max_trans_m),
                         uniform(rng, -max_trans_m, max_trans_m))};
  return compose(j, t);
}

/// Observations and both frames' targets for a set of episodes and rigs.
struct LabeledSet {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd base_targets;
  Eigen::MatrixXd camera_targets;
  /// Extrinsics used to map camera-frame predictions back, per row.
  std::vector<Transform> calibration;
};

namespace detail {

struct ViewSpec {
  CameraRig observed;     // rig that produces the observation
  Transform calibration;  // extrinsics believed at inference
  int view_index;         // one-hot slot, -1 for none
};

inline LabeledSet label(const std::vector<SyntheticEpisode>& episodes,
                        const std::vector<ViewSpec>& views, int onehot_width) {
  const Eigen::Index obs_dims = static_cast<Eigen::Index>(ObservationVector::kDims) + onehot_width;
  std::size_t rows = 0;
  for (const auto& se : episodes) rows += (se.episode.steps.size() - 1) * views.size();
  LabeledSet out;
  out.inputs.setZero(static_cast<Eigen::Index>(rows), obs_dims);
  out.base_targets.resize(static_cast<Eigen::Index>(rows), kActionDims);
  out.camera_targets.resize(static_cast<Eigen::Index>(rows), kActionDims);
  out.calibration.reserve(rows);

  Eigen::Index r = 0;
  for (const auto& se : episodes) {
    TrajectoryEpisode e = se.episode;
    e.cameras.clear();
    for (const auto& v : views) e.cameras.push_back(v.observed);
    const auto base = expand_to_camera_targets(e, Frame::base, {});
    const auto cam = expand_to_camera_targets(e, Frame::camera, {});
    const std::size_t per_view = base.size();
    for (std::size_t k = 0; k < views.size(); ++k) {
      for (std::size_t i = 0; i < per_view; ++i, ++r) {
        const Step& st = e.steps[i];
        const ObservationVector o = build_observation(st.pose_base, se.object, st.gripper,
                                                      views[k].observed);
        for (std::size_t c = 0; c < ObservationVector::kDims; ++c) {
          out.inputs(r, static_cast<Eigen::Index>(c)) = o.values[c];
        }
        if (views[k].view_index >= 0 && views[k].view_index < onehot_width) {
          out.inputs(r, static_cast<Eigen::Index>(ObservationVector::kDims) + views[k].view_index) =
              1.0;
        }
        const Vec7 b = base[i].action7.to_array();
        const Vec7 c = cam[k * per_view + i].action7.to_array();
        for (std::size_t d = 0; d < kActionDims; ++d) {
          out.base_targets(r, static_cast<Eigen::Index>(d)) = b[d];
          out.camera_targets(r, static_cast<Eigen::Index>(d)) = c[d];
        }
        out.calibration.push_back(views[k].calibration);
      }
    }
  }
  return out;
}

inline ActionVector7 row_action(const Eigen::MatrixXd& m, Eigen::Index r) {
  Vec7 a{};
  for (std::size_t d = 0; d < kActionDims; ++d) a[d] = m(r, static_cast<Eigen::Index>(d));
  a[6] = std::clamp(a[6], 0.0, 1.0);
  return ActionVector7::from_array(a);
}

/// Both arms' MSE against base-frame truth.
inline ArmScores score(const RegressorModel& base_model, const RegressorModel& cam_model,
                       const LabeledSet& set) {
  const Eigen::MatrixXd pb = base_model.predict(set.inputs);
  const Eigen::MatrixXd pc = cam_model.predict(set.inputs);
  Eigen::MatrixXd base_pred(pb.rows(), pb.cols());
  Eigen::MatrixXd cam_pred(pc.rows(), pc.cols());
  for (Eigen::Index r = 0; r < pb.rows(); ++r) {
    const Vec7 b = row_action(pb, r).to_array();
    const Vec7 c =
        recover_world_action(row_action(pc, r), set.calibration[static_cast<std::size_t>(r)])
            .to_array();
    for (std::size_t d = 0; d < kActionDims; ++d) {
      base_pred(r, static_cast<Eigen::Index>(d)) = b[d];
      cam_pred(r, static_cast<Eigen::Index>(d)) = c[d];
    }
  }
  return {mean_squared_error(base_pred, set.base_targets),
          mean_squared_error(cam_pred, set.base_targets)};
}

inline std::vector<SyntheticEpisode> make_episodes(const SyntheticTaskSpec& task, int count,
                                                   std::uint64_t seed, std::uint64_t stream,
                                                   const std::string& prefix) {
  std::vector<SyntheticEpisode> out;
  for (int i = 0; i < count; ++i) {
    SyntheticTaskSpec t = task;
    t.family = (i % 2 == 0) ? MotionFamily::reach : MotionFamily::reach_grasp_lift;
    SyntheticEpisode se =
        gen_trajectory(t, mix_seed(seed, stream * 1000003ull + static_cast<std::uint64_t>(i)));
    se.episode.episode_id = prefix + std::to_string(i);
    out.push_back(std::move(se));
  }
  return out;
}

}  // namespace detail

/// Index of training views, novel views and the rigs for one seed.
struct ViewSelection {
  std::vector<CameraRig> train;
  std::vector<CameraRig> novel;
};

inline ViewSelection select_views(const BenchConfig& cfg, std::uint64_t seed) {
  ViewSelection vs;
  if (cfg.identity_control) {
    CameraRig rig{"identity", cfg.pool.intrinsics, Transform::identity(), {}};
    vs.train = {rig};
    vs.novel = {rig};
    return vs;
  }
  if (cfg.train_views < 1 || cfg.novel_views < 1 ||
      cfg.train_views + cfg.novel_views > cfg.pool.pool_size) {
    throw Error("bad_config", "pool too small for the requested train + novel views");
  }
  CameraPoolSpec ps = cfg.pool;
  ps.seed = mix_seed(seed, 1);
  const auto pool = sample_camera_pool(ps);
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(mix_seed(seed, 2));
  detail::portable_shuffle(idx, rng);
  for (int i = 0; i < cfg.train_views; ++i) vs.train.push_back(pool[idx[static_cast<std::size_t>(i)]]);
  for (int i = 0; i < cfg.novel_views; ++i) {
    vs.novel.push_back(pool[idx[static_cast<std::size_t>(cfg.train_views + i)]]);
  }
  return vs;
}

/// The degenerate control: one camera with T = I. The workspace is moved to
/// sit in front of that camera so every observation stays well defined.
inline BenchConfig identity_control_config(BenchConfig c) {
  c.identity_control = true;
  const Vec3 size = c.task.workspace_max - c.task.workspace_min;
  c.task.workspace_min = Vec3(-size.x() / 2, -size.y() / 2, 0.9);
  c.task.workspace_max = c.task.workspace_min + size;
  return c;
}

inline SeedResult run_seed(const BenchConfig& cfg, std::uint64_t seed) {
  SeedResult result;
  result.seed = seed;
  const ViewSelection views = select_views(cfg, seed);
  if (!cfg.identity_control) {
    check_workspace_visibility(cfg.task, views.train);
    check_workspace_visibility(cfg.task, views.novel);
  }
  const int onehot = cfg.view_onehot ? static_cast<int>(views.train.size()) : 0;

  const auto train_eps = detail::make_episodes(cfg.task, cfg.train_episodes, seed, 3, "train_");
  const auto val_eps = detail::make_episodes(cfg.task, cfg.val_episodes, seed, 4, "val_");

  std::vector<detail::ViewSpec> seen, perturbed, novel;
  std::mt19937_64 jitter_rng(mix_seed(seed, 5));
  const double max_rot = cfg.identity_control ? 0.0 : cfg.perturb_rotation_deg * kPi / 180.0;
  const double max_trans = cfg.identity_control ? 0.0 : cfg.perturb_translation_m;
  for (std::size_t k = 0; k < views.train.size(); ++k) {
    const int slot = static_cast<int>(k);
    seen.push_back({views.train[k], views.train[k].extrinsics, slot});
    CameraRig moved = views.train[k];
    if (max_rot > 0.0 || max_trans > 0.0) {
      moved.extrinsics = jitter_extrinsics(moved.extrinsics, max_rot, max_trans, jitter_rng);
    }
    perturbed.push_back({moved, views.train[k].extrinsics, slot});
  }
  for (const auto& rig : views.novel) {
    novel.push_back({rig, rig.extrinsics, cfg.identity_control ? 0 : -1});
  }

  LabeledSet train;
  try {
    train = detail::label(train_eps, seen, onehot);
  } catch (const Error& e) {
    throw Error(e.code(), "seed " + std::to_string(seed) + ": " + e.what());
  }
  RegressorModel base_model, cam_model;
  try {
    const RidgeProblem problem(train.inputs, cfg.lambda);
    base_model = problem.solve(train.base_targets);
    cam_model = problem.solve(train.camera_targets);
  } catch (const Error& e) {
    throw Error(e.code(), "seed " + std::to_string(seed) + ": regressor failed to train: " +
                              e.what());
  }
  const std::array<const std::vector<detail::ViewSpec>*, 3> sets{&seen, &perturbed, &novel};
  for (std::size_t c = 0; c < 3; ++c) {
    result.by_condition[c] = detail::score(base_model, cam_model, detail::label(val_eps, *sets[c], onehot));
  }
  return result;
}

inline BenchReport run_benchmark(const BenchConfig& cfg) {
  if (cfg.seeds.empty()) throw Error("bad_config", "no seeds configured");
  BenchReport report;
  report.seeds.resize(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), cfg.jobs,
               [&](std::size_t i) { report.seeds[i] = run_seed(cfg, cfg.seeds[i]); });
  return report;
}

// ---------------------------------------------------------------------------
// Well-posedness witness
// ---------------------------------------------------------------------------

struct WitnessResult {
  std::size_t samples = 0;
  std::size_t views = 0;
  std::size_t base_conflicts = 0;
  std::size_t camera_conflicts = 0;
};

/// Counts pairs of rows whose observations fall in the same bucket (grid of
/// `bucket` width) while their targets differ by more than `target_tol`.
inline std::size_t count_observation_conflicts(const Eigen::MatrixXd& inputs,
                                               const Eigen::MatrixXd& targets, double bucket,
                                               double target_tol) {
  std::map<std::vector<long long>, std::vector<Eigen::Index>> buckets;
  for (Eigen::Index r = 0; r < inputs.rows(); ++r) {
    std::vector<long long> key(static_cast<std::size_t>(inputs.cols()));
    for (Eigen::Index c = 0; c < inputs.cols(); ++c) {
      key[static_cast<std::size_t>(c)] = std::llround(inputs(r, c) / bucket);
    }
    buckets[key].push_back(r);
  }
  std::size_t conflicts = 0;
  for (const auto& [key, rows] : buckets) {
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        const double diff = (targets.row(rows[a]) - targets.row(rows[b])).cwiseAbs().maxCoeff();
        conflicts += diff > target_tol;
      }
    }
  }
  return conflicts;
}

/// Picks `count` rigs from the pool whose pairwise rotation differs by at
/// least `min_angle` radians.
inline std::vector<CameraRig> distinct_views(const std::vector<CameraRig>& pool, std::size_t count,
                                             double min_angle) {
  std::vector<CameraRig> out;
  for (const auto& rig : pool) {
    const bool far = std::all_of(out.begin(), out.end(), [&](const CameraRig& o) {
      return rotation_angle(o.extrinsics.rotation.transpose() * rig.extrinsics.rotation) >= min_angle;
    });
    if (far) out.push_back(rig);
    if (out.size() == count) return out;
  }
  throw Error("bad_config", "camera pool lacks enough mutually distinct views");
}

/// Builds a multi-view dataset in which the same world trajectory is also
/// replayed in a rigidly moved scene, chosen so that view k of the moved
/// scene sees exactly what view 0 sees of the original. Camera-frame targets
/// of such pairs coincide; robot-base targets do not.
inline WitnessResult well_posedness_witness(const BenchConfig& cfg, std::uint64_t seed,
                                            std::size_t view_count = 4, int episodes = 6) {
  CameraPoolSpec ps = cfg.pool;
  ps.seed = mix_seed(seed, 1);
  const auto views = distinct_views(sample_camera_pool(ps), view_count, 20.0 * kPi / 180.0);
  const auto eps = detail::make_episodes(cfg.task, episodes, seed, 6, "witness_");

  std::vector<SyntheticEpisode> all;
  std::vector<std::vector<detail::ViewSpec>> per_episode_views;
  std::vector<detail::ViewSpec> every_view;
  for (const auto& v : views) every_view.push_back({v, v.extrinsics, -1});
  for (const auto& se : eps) {
    all.push_back(se);
    per_episode_views.push_back(every_view);
    for (std::size_t k = 1; k < views.size(); ++k) {
      const Pose motion =
          compose(inverse(views[k].extrinsics), views[0].extrinsics).as<PoseRole>();
      SyntheticEpisode moved = move_world(se, motion);
      moved.episode.episode_id += "_moved" + std::to_string(k);
      all.push_back(std::move(moved));
      per_episode_views.push_back({{views[k], views[k].extrinsics, -1}});
    }
  }

  LabeledSet merged;
  std::vector<LabeledSet> parts;
  Eigen::Index rows = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    parts.push_back(detail::label({all[i]}, per_episode_views[i], 0));
    rows += parts.back().inputs.rows();
  }
  merged.inputs.resize(rows, static_cast<Eigen::Index>(ObservationVector::kDims));
  merged.base_targets.resize(rows, kActionDims);
  merged.camera_targets.resize(rows, kActionDims);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    merged.inputs.middleRows(at, p.inputs.rows()) = p.inputs;
    merged.base_targets.middleRows(at, p.inputs.rows()) = p.base_targets;
    merged.camera_targets.middleRows(at, p.inputs.rows()) = p.camera_targets;
    at += p.inputs.rows();
  }

  WitnessResult w;
  w.samples = static_cast<std::size_t>(rows);
  w.views = views.size();
  w.base_conflicts = count_observation_conflicts(merged.inputs, merged.base_targets, 1e-6, 1e-6);
  w.camera_conflicts =
      count_observation_conflicts(merged.inputs, merged.camera_targets, 1e-6, 1e-6);
  return w;
}

// ---------------------------------------------------------------------------
// Config and report I/O
// ---------------------------------------------------------------------------

namespace detail {

inline Vec3 vec3_from(const nlohmann::json& j) {
  const auto a = j.get<std::array<double, 3>>();
  return {a[0], a[1], a[2]};
}

inline Range range_from(const nlohmann::json& j) {
  const auto a = j.get<std::array<double, 2>>();
  return {a[0], a[1]};
}

}  // namespace detail

/// Every field is optional; missing fields keep the BenchConfig defaults.
/// Angles are in radians, lengths in meters.
inline BenchConfig bench_config_from_json(const nlohmann::json& j) {
  BenchConfig c;
  const std::set<std::string> known{
      "pool_size",       "radius_m",        "elevation_rad",  "azimuth_rad",
      "look_at_m",       "intrinsics",      "workspace_min_m", "workspace_max_m",
      "steps",           "noise_scale_m",   "yaw_offset_rad", "servo_gain",
      "train_views",     "novel_views",     "train_episodes", "val_episodes",
      "seeds",           "lambda",          "view_onehot",    "perturb_rotation_deg",
      "perturb_translation_m", "identity_control", "jobs"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw Error("bad_config", "unknown bench config field '" + key + "'");
  }
  try {
    if (j.contains("pool_size")) c.pool.pool_size = j["pool_size"].get<int>();
    if (j.contains("radius_m")) c.pool.radius = detail::range_from(j["radius_m"]);
    if (j.contains("elevation_rad")) c.pool.elevation = detail::range_from(j["elevation_rad"]);
    if (j.contains("azimuth_rad")) c.pool.azimuth = detail::range_from(j["azimuth_rad"]);
    if (j.contains("look_at_m")) c.pool.look_at = detail::vec3_from(j["look_at_m"]);
    if (j.contains("intrinsics")) {
      const auto& k = j["intrinsics"];
      c.pool.intrinsics = {k.at("fx").get<double>(), k.at("fy").get<double>(),
                           k.at("cx").get<double>(), k.at("cy").get<double>(),
                           k.at("width").get<int>(),  k.at("height").get<int>()};
    }
    if (j.contains("workspace_min_m")) c.task.workspace_min = detail::vec3_from(j["workspace_min_m"]);
    if (j.contains("workspace_max_m")) c.task.workspace_max = detail::vec3_from(j["workspace_max_m"]);
    if (j.contains("steps")) c.task.steps = j["steps"].get<int>();
    if (j.contains("noise_scale_m")) c.task.noise_scale = j["noise_scale_m"].get<double>();
    if (j.contains("yaw_offset_rad")) c.task.yaw_offset = j["yaw_offset_rad"].get<double>();
    if (j.contains("servo_gain")) c.task.servo_gain = j["servo_gain"].get<double>();
    if (j.contains("train_views")) c.train_views = j["train_views"].get<int>();
    if (j.contains("novel_views")) c.novel_views = j["novel_views"].get<int>();
    if (j.contains("train_episodes")) c.train_episodes = j["train_episodes"].get<int>();
    if (j.contains("val_episodes")) c.val_episodes = j["val_episodes"].get<int>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
    if (j.contains("view_onehot")) c.view_onehot = j["view_onehot"].get<bool>();
    if (j.contains("perturb_rotation_deg")) c.perturb_rotation_deg = j["perturb_rotation_deg"].get<double>();
    if (j.contains("perturb_translation_m")) c.perturb_translation_m = j["perturb_translation_m"].get<double>();
    if (j.contains("identity_control")) c.identity_control = j["identity_control"].get<bool>();
    if (j.contains("jobs")) c.jobs = j["jobs"].get<unsigned>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad_config", std::string("bench config: ") + e.what());
  }
  return c;
}

inline nlohmann::json to_json(const BenchConfig& c) {
  const Intrinsics& k = c.pool.intrinsics;
  return {{"pool_size", c.pool.pool_size},
          {"radius_m", {c.pool.radius.lo, c.pool.radius.hi}},
          {"elevation_rad", {c.pool.elevation.lo, c.pool.elevation.hi}},
          {"azimuth_rad", {c.pool.azimuth.lo, c.pool.azimuth.hi}},
          {"look_at_m", {c.pool.look_at.x(), c.pool.look_at.y(), c.pool.look_at.z()}},
          {"intrinsics",
           {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}, {"width", k.width}, {"height", k.height}}},
          {"workspace_min_m", {c.task.workspace_min.x(), c.task.workspace_min.y(), c.task.workspace_min.z()}},
          {"workspace_max_m", {c.task.workspace_max.x(), c.task.workspace_max.y(), c.task.workspace_max.z()}},
          {"steps", c.task.steps},
          {"noise_scale_m", c.task.noise_scale},
          {"yaw_offset_rad", c.task.yaw_offset},
          {"servo_gain", c.task.servo_gain},
          {"train_views", c.train_views},
          {"novel_views", c.novel_views},
          {"train_episodes", c.train_episodes},
          {"val_episodes", c.val_episodes},
          {"seeds", c.seeds},
          {"lambda", c.lambda},
          {"view_onehot", c.view_onehot},
          {"perturb_rotation_deg", c.perturb_rotation_deg},
          {"perturb_translation_m", c.perturb_translation_m},
          {"identity_control", c.identity_control}};
}

inline nlohmann::json to_json(const BenchReport& r) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& s : r.seeds) {
    nlohmann::json row = {{"seed", s.seed}};
    for (Condition c : kConditions) {
      const auto& a = s.by_condition[static_cast<std::size_t>(c)];
      row[to_string(c)] = {{"base_mse", a.base_mse}, {"camera_mse", a.camera_mse}};
    }
    seeds.push_back(std::move(row));
  }
  nlohmann::json wins = nlohmann::json::object();
  for (Condition c : kConditions) wins[to_string(c)] = r.camera_wins(c);
  return {{"seeds", seeds}, {"camera_wins", wins}, {"seed_count", r.seeds.size()}};
}

inline std::string format_table(const BenchReport& r) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %13s %13s %13s %13s %13s %13s\n", "seed", "seen/base",
                "seen/camera", "perturb/base", "perturb/cam", "novel/base", "novel/camera");
  os << line;
  for (const auto& s : r.seeds) {
    const auto& a = s.by_condition;
    std::snprintf(line, sizeof(line), "%-8llu %13.6e %13.6e %13.6e %13.6e %13.6e %13.6e\n",
                  static_cast<unsigned long long>(s.seed), a[0].base_mse, a[0].camera_mse,
                  a[1].base_mse, a[1].camera_mse, a[2].base_mse, a[2].camera_mse);
    os << line;
  }
  std::snprintf(line, sizeof(line), "camera-frame wins: seen %d/%zu, perturbed %d/%zu, novel %d/%zu\n",
                r.camera_wins(Condition::seen), r.seeds.size(), r.camera_wins(Condition::perturbed),
                r.seeds.size(), r.camera_wins(Condition::novel), r.seeds.size());
  os << line;
  return os.str();
}

}  // namespace obsframe

#endif  // OBSFRAME_BENCH_HPP
