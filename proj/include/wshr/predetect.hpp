#pragma once

#include <cstddef>
#include <vector>

#include "wshr/cube.hpp"

namespace wshr {

/// Relative ridge added to a correlation/covariance matrix when it is
/// ill-conditioned: eps * trace / bands on the diagonal.
inline constexpr double kRidgeEpsilon = 1e-6;

/// Symmetric positive definite factorization with automatic ridge loading.
/// Throws NumericError when the matrix stays singular after loading.
class RegularizedSolver {
 public:
  explicit RegularizedSolver(const Eigen::MatrixXd& symmetric);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return llt_.solve(rhs); }
  bool ridge_applied() const { return ridge_ > 0.0; }
  double ridge() const { return ridge_; }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double ridge_ = 0.0;
};

/// Constrained energy minimization filter w = R^-1 d / (d^T R^-1 d) with R the
/// non-centered sample correlation over all pixels.
class CemFilter {
 public:
  CemFilter(const HsiCube& cube, const Spectrum& signature);

  const Eigen::VectorXd& weights() const { return weights_; }
  double score(const Spectrum& x) const { return weights_.dot(x); }

 private:
  Eigen::VectorXd weights_;
};

ScoreMap cem_detect(const HsiCube& cube, const Spectrum& signature);

/// Adaptive cosine estimator with global mean and covariance:
///   (d' S^-1 (x-mu))^2 / ((d' S^-1 d) ((x-mu)' S^-1 (x-mu))).
/// Returns 0 for x == mu.
ScoreMap ace_detect(const HsiCube& cube, const Spectrum& signature);

struct TrainingSets {
  /// Row-major pixel indices, highest score first.
  std::vector<std::size_t> target_indices;
  /// Row-major pixel indices, lowest score first.
  std::vector<std::size_t> background_indices;
  Eigen::MatrixXd target_samples;      // bands x n_target
  Eigen::MatrixXd background_samples;  // bands x floor(bg_fraction * N)
};

/// Splits pixels by pre-detection score. Pixels are ranked by (score,
/// row-major index) ascending; the background set is the first
/// floor(bg_fraction * N) of that order and the target set the last
/// n_target. Throws InvalidArgument when the two would overlap.
TrainingSets select_training_sets(const ScoreMap& scores, const HsiCube& cube,
                                  std::size_t n_target, double bg_fraction);

}  // namespace wshr
