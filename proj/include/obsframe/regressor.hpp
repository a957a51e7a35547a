#ifndef OBSFRAME_REGRESSOR_HPP
#define OBSFRAME_REGRESSOR_HPP

// Closed-form ridge regression over a degree-2 polynomial feature map.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

#include "obsframe/error.hpp"

namespace obsframe {

/// Feature count of [1, x_i, x_i * x_j (i <= j)] for d inputs.
inline std::size_t polynomial_feature_count(std::size_t d) { return 1 + d + d * (d + 1) / 2; }

inline void polynomial_features(std::span<const double> x, std::span<double> out) {
  const std::size_t d = x.size();
  std::size_t k = 0;
  out[k++] = 1.0;
  for (std::size_t i = 0; i < d; ++i) out[k++] = x[i];
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) out[k++] = x[i] * x[j];
  }
}

/// Row-wise feature expansion of an n x d input matrix.
inline Eigen::MatrixXd expand_features(const Eigen::MatrixXd& inputs) {
  const auto d = static_cast<std::size_t>(inputs.cols());
  Eigen::MatrixXd f(inputs.rows(), static_cast<Eigen::Index>(polynomial_feature_count(d)));
  std::vector<double> row(d), feat(static_cast<std::size_t>(f.cols()));
  for (Eigen::Index r = 0; r < inputs.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) row[c] = inputs(r, static_cast<Eigen::Index>(c));
    polynomial_features(row, feat);
    for (std::size_t c = 0; c < feat.size(); ++c) f(r, static_cast<Eigen::Index>(c)) = feat[c];
  }
  return f;
}

struct RegressorModel {
  /// features x outputs
  Eigen::MatrixXd weights;
  double lambda = 0.0;

  [[nodiscard]] Eigen::MatrixXd predict(const Eigen::MatrixXd& inputs) const {
    return expand_features(inputs) * weights;
  }
};

/// Factorizes (F^T F / n + lambda I) once so several target matrices over the
/// same inputs share it.
class RidgeProblem {
 public:
  RidgeProblem(const Eigen::MatrixXd& inputs, double lambda)
      : features_(expand_features(inputs)), lambda_(lambda) {
    if (!(lambda > 0.0)) throw Error("bad_lambda", "ridge lambda must be > 0");
    const auto n = features_.rows();
    if (n < features_.cols()) {
      throw Error("too_few_samples", "ridge regression needs at least " +
                                         std::to_string(features_.cols()) + " samples, got " +
                                         std::to_string(n));
    }
    Eigen::MatrixXd gram = features_.transpose() * features_ / static_cast<double>(n);
    gram.diagonal().array() += lambda;
    llt_.compute(gram);
    if (llt_.info() != Eigen::Success || !(llt_.rcond() > 1e-15)) {
      throw Error("degenerate_regression",
                  "normal equations are singular beyond what lambda repairs");
    }
  }

  [[nodiscard]] RegressorModel solve(const Eigen::MatrixXd& targets) const {
    if (targets.rows() != features_.rows()) {
      throw Error("shape_mismatch", "targets and inputs differ in row count");
    }
    const Eigen::MatrixXd rhs =
        features_.transpose() * targets / static_cast<double>(features_.rows());
    return {llt_.solve(rhs), lambda_};
  }

  [[nodiscard]] const Eigen::MatrixXd& features() const { return features_; }

 private:
  Eigen::MatrixXd features_;
  double lambda_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

inline RegressorModel train_regressor(const Eigen::MatrixXd& inputs,
                                      const Eigen::MatrixXd& targets, double lambda) {
  return RidgeProblem(inputs, lambda).solve(targets);
}

inline double mean_squared_error(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& truth) {
  return (pred - truth).squaredNorm() / static_cast<double>(pred.size());
}

}  // namespace obsframe

#endif  // OBSFRAME_REGRESSOR_HPP
