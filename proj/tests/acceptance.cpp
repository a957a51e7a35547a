// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "obsframe/obsframe.hpp"
#include "obsframe/cli.hpp"

using namespace obsframe;
using testing_util::random_rigid;
using testing_util::TempDir;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

class Gate {
 public:
  void check(const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  " << name << ": " << detail << std::endl;
    failures_ += !pass;
  }
  // Criteria that throw are reported as failures rather than aborting the run.
  void guarded(const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      check(name, false, std::string("exception: ") + e.what());
    }
  }
  [[nodiscard]] int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

struct CliOutcome {
  int code;
  std::string out;
};

CliOutcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "obsframe");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::cerr << err.str();
  return {code, out.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_tree(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::vector<std::filesystem::path> fa = list_episode_files(a), fb = list_episode_files(b);
  if (fa.size() != fb.size() || fa.empty()) return false;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (fa[i].filename() != fb[i].filename() || slurp(fa[i]) != slurp(fb[i])) return false;
  }
  return true;
}

void transform_roundtrip(Gate& g) {
  const auto st = cli::run_roundtrip(100000, 1);
  g.check("transform round-trip",
          st.max_translation_error < 1e-9 && st.max_rotation_error < 1e-9 && st.seconds < 5.0,
          fmt("1e5 camera->base->camera pairs, max dt %.2e m, max dR %.2e rad, %.2f s "
              "(limits 1e-9, 1e-9, 5 s)",
              st.max_translation_error, st.max_rotation_error, st.seconds));
}

void conjugation_equivalence(Gate& g) {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Transform t = random_rigid<ExtrinsicRole>(rng);
    const Pose p1 = random_rigid<PoseRole>(rng);
    const Pose p2 = random_rigid<PoseRole>(rng);
    const ActionMatrix direct = conjugate_action(t, action_from_pose_pair(p1, p2));
    const ActionMatrix two_step = action_from_pose_pair(transform_pose(t, p1), transform_pose(t, p2));
    worst = std::max(worst, max_abs_diff(direct, two_step));
  }
  g.check("conjugation equivalence", worst <= 1e-10,
          fmt("1e5 cases, max entry difference %.2e (limit 1e-10)", worst));
}

void multi_view_consistency(Gate& g) {
  SyntheticTaskSpec task;
  task.steps = 100;
  TrajectoryEpisode e = gen_trajectory(task, 11).episode;
  e.episode_id = "mv";
  CameraPoolSpec pool;
  pool.seed = 11;
  const auto rigs = sample_camera_pool(pool);
  e.cameras.assign(rigs.begin(), rigs.begin() + 20);

  const auto samples = expand_to_camera_targets(e, Frame::camera, {});
  const std::size_t per_view = e.steps.size() - 1;
  double spread = 0.0;
  bool gripper_exact = true;
  for (std::size_t i = 0; i < per_view && samples.size() == 1980; ++i) {
    Vec7 lo, hi;
    lo.fill(1e300);
    hi.fill(-1e300);
    for (std::size_t k = 0; k < e.cameras.size(); ++k) {
      const Vec7 w = recover_world_action(samples[k * per_view + i].action7, e.cameras[k].extrinsics).to_array();
      for (std::size_t d = 0; d < kActionDims; ++d) {
        lo[d] = std::min(lo[d], w[d]);
        hi[d] = std::max(hi[d], w[d]);
      }
      gripper_exact &= w[6] == e.steps[i + 1].gripper;
    }
    for (std::size_t d = 0; d < kActionDims; ++d) spread = std::max(spread, hi[d] - lo[d]);
  }
  g.check("multi-view consistency", samples.size() == 1980 && spread <= 1e-8 && gripper_exact,
          fmt("100 steps x 20 cameras -> %zu samples (want 1980), max pairwise recovered difference "
              "%.2e (limit 1e-8)",
              samples.size(), spread));
}

void codec_bounds(Gate& g) {
  const BinConfig bins{256};
  double sweep_err = 0.0;
  for (std::size_t d = 0; d < kActionDims; ++d) {
    for (int i = 0; i < 10000; ++i) {
      Vec7 n{};
      n[d] = -1.0 + 2.0 * i / 9999.0;
      const Vec7 back = dequantize(quantize(n, bins), bins);
      sweep_err = std::max(sweep_err, std::abs(back[d] - n[d]));
    }
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double matrix_err = 0.0;
  bool gripper_exact = true;
  for (int i = 0; i < 100000; ++i) {
    const ActionMatrix a = random_rigid<ActionRole>(rng, 0.5);
    const double grip = u01(rng);
    const DecodedAction back = decode_action(encode_action(a, grip));
    matrix_err = std::max(matrix_err, max_abs_diff(a, back.action));
    gripper_exact &= back.gripper == grip;
  }

  // Gripper through conversion, recovery and decode.
  SyntheticTaskSpec task;
  task.family = MotionFamily::reach_grasp_lift;
  TrajectoryEpisode e = gen_trajectory(task, 5).episode;
  e.episode_id = "grip";
  CameraPoolSpec pool;
  pool.pool_size = 4;
  e.cameras = sample_camera_pool(pool);
  const auto samples = expand_to_camera_targets(e, Frame::camera, {});
  const std::size_t per_view = e.steps.size() - 1;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double truth = e.steps[j % per_view + 1].gripper;
    const ActionVector7 w = recover_world_action(samples[j].action7, e.cameras[j / per_view].extrinsics);
    gripper_exact &= samples[j].action7.gripper == truth && decode_action(w).gripper == truth;
  }

  g.check("codec bounds", sweep_err <= 1.0 / 256 && matrix_err < 1e-9 && gripper_exact,
          fmt("sweep 1e4 pts/dim max error %.6f (limit 1/256 = %.6f), 1e5 encode/decode max %.2e "
              "(limit 1e-9), gripper bit-exact: %s",
              sweep_err, 1.0 / 256, matrix_err, gripper_exact ? "yes" : "no"));
}

void pinhole(Gate& g) {
  const Intrinsics k{100, 100, 64, 64, 128, 128};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pix(-200.0, 330.0), depth(1e-3, 50.0), xy(-3.0, 3.0);
  double err = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Pixel px{pix(rng), pix(rng)};
    const Pixel back = project(k, unproject(k, px, depth(rng)));
    err = std::max({err, std::abs(back.u - px.u), std::abs(back.v - px.v)});
    const Vec3 p(xy(rng), xy(rng), depth(rng));
    const Pixel q = project(k, p);
    err = std::max(err, (unproject(k, q, p.z()) - p).cwiseAbs().maxCoeff());
  }
  const Pixel pp = project(k, Vec3(0, 0, 2.5));
  const Pixel ex = project(k, Vec3(0.1, 0.2, 1.0));
  const Vec3 inv = unproject(k, {74, 84}, 1.0);
  const bool examples = std::abs(pp.u - 64) < 1e-12 && std::abs(pp.v - 64) < 1e-12 &&
                        std::abs(ex.u - 74) < 1e-9 && std::abs(ex.v - 84) < 1e-9 &&
                        (inv - Vec3(0.1, 0.2, 1.0)).cwiseAbs().maxCoeff() < 1e-9;
  std::string behind;
  try {
    (void)project(k, Vec3(0.1, 0.2, -0.5));
  } catch (const Error& e) {
    behind = e.code();
  }
  g.check("pinhole spot-checks", err <= 1e-9 && examples && behind == "behind_camera",
          fmt("mutual inverse max error %.2e (limit 1e-9), principal point and (74, 84) examples %s, "
              "z=-0.5 raises '%s'",
              err, examples ? "ok" : "wrong", behind.c_str()));
}

void split_balance(Gate& g, const std::filesystem::path& episodes) {
  const DatasetManifest all = build_manifest(list_episode_files(episodes));
  bool ratio_ok = all.entries.size() == 20, disjoint = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DatasetManifest m = split_dataset(all, {19, 1}, seed);
    std::set<std::string> train, val;
    for (const auto& e : m.entries) (*e.split == Split::train ? train : val).insert(e.episode_id);
    ratio_ok &= train.size() == 19 && val.size() == 1;
    for (const auto& id : val) disjoint &= !train.contains(id);
  }

  // Imbalanced subsets: drop a varying number of one task's episodes.
  bool balanced = true;
  for (int drop = 0; drop < 9; ++drop) {
    DatasetManifest m = all;
    int dropped = 0;
    std::erase_if(m.entries, [&](const ManifestEntry& e) {
      return e.task == "reach-grasp-lift" && dropped++ < drop;
    });
    for (const DatasetManifest& b : {balance_tasks(m), balance_tasks(split_dataset(m, {3, 1}, 7))}) {
      const auto counts = task_sample_counts(b);
      std::int64_t target = 0, episode = 0;
      for (const auto& [t, c] : counts) target = std::max(target, c);
      for (const auto& e : b.entries) episode = std::max(episode, e.samples());
      for (const auto& [t, c] : counts) balanced &= c <= target && target - c < episode;
    }
  }
  g.check("split/balance", ratio_ok && disjoint && balanced,
          fmt("19:1 on 20 episodes over 20 seeds %s, train/val disjoint %s, balanced counts within "
              "one episode %s",
              ratio_ok ? "ok" : "wrong", disjoint ? "yes" : "no", balanced ? "yes" : "no"));
}

void benchmark(Gate& g, const std::filesystem::path& dir) {
  const auto t0 = Clock::now();
  const CliOutcome r = run_cli({"bench", "--seed", "0", "--output", (dir / "bench.json").string()});
  const double secs = seconds_since(t0);
  const auto report = nlohmann::json::parse(slurp(dir / "bench.json"));
  const int novel = report.at("camera_wins").at("novel");
  const std::size_t seeds = report.at("seed_count");

  const BenchReport control = run_benchmark(identity_control_config(BenchConfig{}));
  double gap = 0.0;
  for (const auto& s : control.seeds) {
    for (const auto& a : s.by_condition) gap = std::max(gap, std::abs(a.base_mse - a.camera_mse));
  }
  g.check("benchmark directional claim",
          r.code == 0 && seeds == 10 && novel >= 9 && gap <= 1e-10 && secs < 120.0,
          fmt("camera-frame lower novel-view MSE in %d/%zu seeds (need >= 9/10), identity-extrinsic "
              "control max |MSE gap| %.2e (limit 1e-10), full bench %.1f s (limit 120 s)",
              novel, seeds, gap, secs));
}

void witness(Gate& g) {
  std::size_t base = 0, camera = 0, samples = 0;
  bool each = true;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const WitnessResult w = well_posedness_witness(BenchConfig{}, seed);
    each &= w.base_conflicts >= 1 && w.camera_conflicts == 0;
    base += w.base_conflicts;
    camera += w.camera_conflicts;
    samples += w.samples;
  }
  g.check("well-posedness witness", each,
          fmt("3 seeds, %zu samples: base-frame conflicting pairs %zu (need >= 1 each), camera-frame %zu "
              "(need 0)",
              samples, base, camera));
}

void determinism(Gate& g, const TempDir& dir) {
  const std::string eps = (dir / "eps").string();
  bool convert_same = true;
  for (const char* mode : {"continuous", "discrete"}) {
    std::vector<std::string> files;
    for (const char* jobs : {"1", "8"}) {
      const std::string out = (dir / (std::string(mode) + jobs + ".jsonl")).string();
      std::vector<std::string> args{"convert", "--input", eps, "--output", out, "--jobs", jobs};
      if (std::string(mode) == "discrete") args.insert(args.end(), {"--discrete", "--fit-stats"});
      convert_same &= run_cli(args).code == 0;
      files.push_back(slurp(out));
      if (std::string(mode) == "discrete") files.push_back(slurp(dir / (std::string(mode) + jobs + ".stats.json")));
    }
    convert_same &= !files[0].empty() && files[0] == files[files.size() / 2];
    if (files.size() == 4) convert_same &= files[1] == files[3];
  }

  const std::string gen2 = (dir / "eps2").string();
  const bool gen_same = run_cli({"gen-synthetic", "--output", gen2, "--episodes", "20", "--views", "4",
                                 "--seed", "21"})
                                .code == 0 &&
                        same_tree(eps, gen2);

  auto twice = [&](std::vector<std::string> args, const std::string& stem) {
    std::string outputs[2];
    for (int i = 0; i < 2; ++i) {
      const auto path = dir / (stem + std::to_string(i) + ".json");
      auto a = args;
      a.insert(a.end(), {"--output", path.string()});
      if (run_cli(a).code != 0) return false;
      outputs[i] = slurp(path);
    }
    return !outputs[0].empty() && outputs[0] == outputs[1];
  };
  const bool split_same = twice({"split", "--input", eps, "--ratio", "19:1", "--seed", "5", "--stratify"}, "split");
  const bool balance_same = twice({"balance", "--input", eps}, "balance");
  const bool bench_same = twice({"bench", "--seed", "3", "--jobs", "2"}, "bench");

  g.check("determinism", convert_same && gen_same && split_same && balance_same && bench_same,
          fmt("convert --jobs 8 vs 1 byte-identical %s; repeated gen-synthetic %s, split %s, balance %s, "
              "bench %s",
              convert_same ? "yes" : "no", gen_same ? "same" : "differs", split_same ? "same" : "differs",
              balance_same ? "same" : "differs", bench_same ? "same" : "differs"));
}

}  // namespace

int main() {
  Gate g;
  TempDir dir("acceptance");
  const bool generated = run_cli({"gen-synthetic", "--output", (dir / "eps").string(), "--episodes", "20",
                                  "--views", "4", "--seed", "21"})
                             .code == 0;
  if (!generated) std::cout << "note: episode generation failed; dependent criteria will fail\n";

  g.guarded("transform round-trip", [&] { transform_roundtrip(g); });
  g.guarded("conjugation equivalence", [&] { conjugation_equivalence(g); });
  g.guarded("multi-view consistency", [&] { multi_view_consistency(g); });
  g.guarded("codec bounds", [&] { codec_bounds(g); });
  g.guarded("pinhole spot-checks", [&] { pinhole(g); });
  g.guarded("split/balance", [&] { split_balance(g, dir / "eps"); });
  g.guarded("benchmark directional claim", [&] { benchmark(g, dir.path()); });
  g.guarded("well-posedness witness", [&] { witness(g); });
  g.guarded("determinism", [&] { determinism(g, dir); });

  std::cout << (g.failures() == 0 ? "ALL PASS" : std::to_string(g.failures()) + " FAILED") << std::endl;
  return g.failures() == 0 ? 0 : 1;
}
