// Fits normalization bounds on a handful of actions, tokenizes them at 256
// bins and shows the reconstruction error per dimension. Values outside the
// fitted quantile bounds are clamped, so they are counted separately.

#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "obsframe/action_codec.hpp"

using namespace obsframe;

int main() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> small(0.0, 0.01);
  std::vector<ActionVector7> actions;
  for (int i = 0; i < 500; ++i) {
    actions.push_back({small(rng), small(rng), small(rng), small(rng), small(rng), small(rng),
                       i % 2 ? 1.0 : 0.0});
  }
  const NormalizationStats stats = fit_normalization(actions, 0.01, 0.99, "camera");
  const BinConfig bins;

  Vec7 worst{};
  std::array<int, kActionDims> clamped{};
  for (const auto& a : actions) {
    const ActionTokens t = quantize(normalize(a, stats), bins);
    const Vec7 back = denormalize(dequantize(t, bins), stats).to_array();
    const Vec7 orig = a.to_array();
    for (std::size_t d = 0; d < kActionDims; ++d) {
      if (orig[d] < stats.lower[d] || orig[d] > stats.upper[d]) {
        ++clamped[d];
      } else {
        worst[d] = std::max(worst[d], std::abs(back[d] - orig[d]));
      }
    }
  }
  const char* names[] = {"x", "y", "z", "roll", "pitch", "yaw", "gripper"};
  for (std::size_t d = 0; d < kActionDims; ++d) {
    const double half_bin = (stats.upper[d] - stats.lower[d]) / (2.0 * bins.bins_per_dimension);
    std::printf("%-8s range [%+.4f, %+.4f]  in-range worst error %.2e (half bin %.2e)  clamped %d\n",
                names[d], stats.lower[d], stats.upper[d], worst[d], half_bin, clamped[d]);
  }
  return 0;
}
