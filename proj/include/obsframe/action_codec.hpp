#ifndef OBSFRAME_ACTION_CODEC_HPP
#define OBSFRAME_ACTION_CODEC_HPP

// 7-dim action vectors <x, y, z, roll, pitch, yaw, gripper> and the discrete
// action space: per-dimension normalization to [-1, 1] followed by uniform
// binning.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "obsframe/error.hpp"
#include "obsframe/se3.hpp"

namespace obsframe {

inline constexpr std::size_t kActionDims = 7;

using Vec7 = std::array<double, kActionDims>;

struct ActionVector7 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
  double gripper = 0.0;

  [[nodiscard]] Vec7 to_array() const { return {x, y, z, roll, pitch, yaw, gripper}; }

  static ActionVector7 from_array(const Vec7& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }

  friend bool operator==(const ActionVector7&, const ActionVector7&) = default;
};

/// Gripper position: 1.0 fully open, 0.0 fully closed.
inline void require_gripper(double g) {
  if (!std::isfinite(g)) throw Error("non_finite", "gripper: non-finite value");
  if (g < 0.0 || g > 1.0) {
    throw Error("gripper_out_of_range", "gripper " + std::to_string(g) + " outside [0, 1]");
  }
}

inline ActionVector7 encode_action(const ActionMatrix& a, double gripper) {
  detail::require_finite(a.finite(), "encode_action");
  require_gripper(gripper);
  const EulerRPY e = rpy_from_rot(a.rotation);
  return {a.translation.x(), a.translation.y(), a.translation.z(), e.roll, e.pitch, e.yaw,
          gripper};
}

struct DecodedAction {
  ActionMatrix action;
  double gripper = 0.0;
};

inline DecodedAction decode_action(const ActionVector7& v) {
  for (double c : v.to_array()) detail::require_finite(std::isfinite(c), "decode_action");
  require_gripper(v.gripper);
  return {{rot_from_rpy({v.roll, v.pitch, v.yaw}), Vec3(v.x, v.y, v.z)}, v.gripper};
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// Per-dimension bounds mapped onto [-1, 1]. The gripper dimension is pinned
/// to [0, 1]; the other six are fit from data.
struct NormalizationStats {
  Vec7 lower{};
  Vec7 upper{};
  double q_low = 0.01;
  double q_high = 0.99;
  std::uint64_t sample_count = 0;
  /// Frame the statistics were fit in ("base" or "camera").
  std::string frame = "camera";
  /// Unix seconds; 0 when the producer asked for a reproducible document.
  std::int64_t created_unix = 0;

  friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

/// Violated invariant names, empty when valid.
inline std::vector<std::string> validate_stats(const NormalizationStats& s) {
  std::vector<std::string> out;
  for (std::size_t d = 0; d < kActionDims; ++d) {
    if (!std::isfinite(s.lower[d]) || !std::isfinite(s.upper[d])) {
      out.push_back("non_finite_bound_" + std::to_string(d));
    } else if (!(s.lower[d] < s.upper[d])) {
      out.push_back("empty_interval_" + std::to_string(d));
    }
  }
  if (s.lower[6] != 0.0 || s.upper[6] != 1.0) out.push_back("gripper_bounds_not_unit");
  return out;
}

/// Linear-interpolated empirical quantile of sorted data (numpy's default).
inline double sorted_quantile(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline NormalizationStats fit_normalization(std::span<const ActionVector7> samples, double q_low,
                                            double q_high, std::string frame = "camera") {
  if (samples.empty()) throw Error("empty_samples", "fit_normalization: no samples");
  if (samples.size() < 2) throw Error("too_few_samples", "fit_normalization: need >= 2 samples");
  if (!(q_low >= 0.0 && q_low < q_high && q_high <= 1.0)) {
    throw Error("bad_quantiles", "fit_normalization: require 0 <= q_low < q_high <= 1");
  }
  NormalizationStats s;
  s.q_low = q_low;
  s.q_high = q_high;
  s.sample_count = samples.size();
  s.frame = std::move(frame);
  std::vector<double> column(samples.size());
  for (std::size_t d = 0; d < 6; ++d) {
    for (std::size_t i = 0; i < samples.size(); ++i) column[i] = samples[i].to_array()[d];
    std::sort(column.begin(), column.end());
    double lo = sorted_quantile(column, q_low);
    double hi = sorted_quantile(column, q_high);
    if (!(lo < hi)) {
      const double mid = 0.5 * (lo + hi);
      lo = mid - 1e-6;
      hi = mid + 1e-6;
    }
    s.lower[d] = lo;
    s.upper[d] = hi;
  }
  s.lower[6] = 0.0;
  s.upper[6] = 1.0;
  return s;
}

/// Affine map [lower, upper] -> [-1, 1] per dimension, clipped.
inline Vec7 normalize(const ActionVector7& v, const NormalizationStats& s) {
  const Vec7 a = v.to_array();
  Vec7 n{};
  for (std::size_t d = 0; d < kActionDims; ++d) {
    const double t = 2.0 * (a[d] - s.lower[d]) / (s.upper[d] - s.lower[d]) - 1.0;
    n[d] = std::clamp(t, -1.0, 1.0);
  }
  return n;
}

inline ActionVector7 denormalize(const Vec7& n, const NormalizationStats& s) {
  Vec7 a{};
  for (std::size_t d = 0; d < kActionDims; ++d) {
    a[d] = s.lower[d] + 0.5 * (n[d] + 1.0) * (s.upper[d] - s.lower[d]);
  }
  return ActionVector7::from_array(a);
}

// ---------------------------------------------------------------------------
// Quantization
// ---------------------------------------------------------------------------

struct BinConfig {
  int bins_per_dimension = 256;
};

using ActionTokens = std::array<int, kActionDims>;

inline void require_bins(const BinConfig& c) {
  if (c.bins_per_dimension < 2) {
    throw Error("bad_bins", "bins_per_dimension must be >= 2, got " +
                                std::to_string(c.bins_per_dimension));
  }
}

/// Bins are [lo, hi) except the last, which also takes +1.
inline int quantize_scalar(double n, int bins) {
  if (!std::isfinite(n) || std::abs(n) > 1.0 + 1e-9) {
    throw Error("not_normalized", "quantize: component " + std::to_string(n) +
                                      " outside [-1, 1]; normalize first");
  }
  const double scaled = std::floor((n + 1.0) * 0.5 * bins);
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(bins - 1)));
}

inline double dequantize_scalar(int token, int bins) {
  return -1.0 + (2.0 * token + 1.0) / bins;
}

inline ActionTokens quantize(const Vec7& n, const BinConfig& c) {
  require_bins(c);
  ActionTokens t{};
  for (std::size_t d = 0; d < kActionDims; ++d) t[d] = quantize_scalar(n[d], c.bins_per_dimension);
  return t;
}

inline Vec7 dequantize(const ActionTokens& t, const BinConfig& c) {
  require_bins(c);
  Vec7 n{};
  for (std::size_t d = 0; d < kActionDims; ++d) {
    if (t[d] < 0 || t[d] >= c.bins_per_dimension) {
      throw Error("bad_token", "token " + std::to_string(t[d]) + " outside [0, bins-1]");
    }
    n[d] = dequantize_scalar(t[d], c.bins_per_dimension);
  }
  return n;
}

}  // namespace obsframe

#endif  // OBSFRAME_ACTION_CODEC_HPP
