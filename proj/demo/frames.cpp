// Builds a two-camera episode in memory, turns it into camera-frame training
// targets and maps every target back to the robot base.

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "obsframe/pipeline.hpp"
#include "obsframe/synthetic.hpp"

using namespace obsframe;

int main() {
  TrajectoryEpisode e;
  e.episode_id = "demo";
  e.task = "reach";
  e.instruction = "move the gripper towards the cube";

  const Intrinsics k{180, 180, 128, 128, 256, 256};
  e.cameras.push_back({"left", k, look_at(Vec3(0.6, 0.8, 0.9), Vec3(0.55, 0, 0.2)), {}});
  e.cameras.push_back({"right", k, look_at(Vec3(0.6, -0.8, 0.9), Vec3(0.55, 0, 0.2)), {}});

  for (int i = 0; i < 5; ++i) {
    Pose p{rot_from_rpy({kPi, 0.0, 0.1 * i}), Vec3(0.5 + 0.02 * i, 0.0, 0.3 - 0.03 * i)};
    e.steps.push_back({i, p, i < 3 ? 1.0 : 0.0});
  }

  const auto base = expand_to_camera_targets(e, Frame::base, {});
  const auto cam = expand_to_camera_targets(e, Frame::camera, {});
  std::printf("%zu base samples, %zu camera samples\n", base.size(), cam.size());

  for (const auto& s : cam) {
    const CameraRig& rig = s.camera_id == "left" ? e.cameras[0] : e.cameras[1];
    const ActionVector7 w = recover_world_action(s.action7, rig.extrinsics);
    const ActionVector7& ref = base[static_cast<std::size_t>(s.step_index)].action7;
    double err = 0.0;
    for (std::size_t d = 0; d < kActionDims; ++d) {
      err = std::max(err, std::abs(w.to_array()[d] - ref.to_array()[d]));
    }
    std::printf("%-5s step %lld  cam (%+.4f %+.4f %+.4f)  base (%+.4f %+.4f %+.4f)  err %.1e\n",
                s.camera_id->c_str(), static_cast<long long>(s.step_index), s.action7.x,
                s.action7.y, s.action7.z, w.x, w.y, w.z, err);
  }
  return 0;
}
