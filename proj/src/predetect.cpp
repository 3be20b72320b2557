#include "wshr/predetect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wshr/error.hpp"
#include "wshr/log.hpp"

namespace wshr {

namespace {

// Below this reciprocal condition estimate the matrix gets ridge loading.
constexpr double kMinRcond = 1e-12;

}  // namespace

RegularizedSolver::RegularizedSolver(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0) {
    throw DimensionError("expected a non-empty square matrix");
  }
  if (!symmetric.allFinite()) throw NumericError("matrix contains non-finite values");
  llt_.compute(symmetric);
  if (llt_.info() == Eigen::Success && llt_.rcond() > kMinRcond) return;

  const double trace = symmetric.trace();
  ridge_ = kRidgeEpsilon * trace / static_cast<double>(symmetric.rows());
  if (!(ridge_ > 0.0)) throw NumericError("singular matrix with non-positive trace");
  Eigen::MatrixXd loaded = symmetric;
  loaded.diagonal().array() += ridge_;
  llt_.compute(loaded);
  if (llt_.info() != Eigen::Success || !(llt_.rcond() > 0.0)) {
    throw NumericError("matrix is singular even after ridge loading");
  }
  logger().debug("ridge loading {:.3e} applied", ridge_);
}

CemFilter::CemFilter(const HsiCube& cube, const Spectrum& signature) {
  check_signature(signature, cube.bands());
  const Eigen::MatrixXd pixels = cube.pixel_matrix();
  const Eigen::MatrixXd correlation =
      (pixels * pixels.transpose()) / static_cast<double>(cube.pixel_count());
  const RegularizedSolver solver(correlation);
  const Eigen::VectorXd r_inv_d = solver.solve(Eigen::VectorXd(signature));
  const double denom = signature.dot(r_inv_d);
  if (!(std::abs(denom) > 0.0) || !std::isfinite(denom)) {
    throw NumericError("degenerate CEM normalization d^T R^-1 d = " + std::to_string(denom));
  }
  weights_ = r_inv_d / denom;
}

ScoreMap cem_detect(const HsiCube& cube, const Spectrum& signature) {
  const CemFilter filter(cube, signature);
  const Eigen::VectorXd scores = cube.pixel_matrix().transpose() * filter.weights();
  return ScoreMap(cube.width(), cube.height(),
                  std::vector<double>(scores.data(), scores.data() + scores.size()));
}

ScoreMap ace_detect(const HsiCube& cube, const Spectrum& signature) {
  check_signature(signature, cube.bands());
  const Eigen::MatrixXd pixels = cube.pixel_matrix();
  const auto n = static_cast<double>(cube.pixel_count());
  const Eigen::VectorXd mean = pixels.rowwise().sum() / n;
  const Eigen::MatrixXd centered = pixels.colwise() - mean;
  const Eigen::MatrixXd covariance = (centered * centered.transpose()) / n;
  const RegularizedSolver solver(covariance);

  const Eigen::VectorXd s_inv_d = solver.solve(Eigen::VectorXd(signature));
  const double d_s_d = signature.dot(s_inv_d);
  const Eigen::MatrixXd whitened = solver.solve(centered);  // S^-1 (x - mu) per column

  ScoreMap out(cube.width(), cube.height());
  for (Eigen::Index i = 0; i < centered.cols(); ++i) {
    const double numerator = s_inv_d.dot(centered.col(i));
    const double x_s_x = centered.col(i).dot(whitened.col(i));
    const double denom = d_s_d * x_s_x;
    out[static_cast<std::size_t>(i)] = denom > 0.0 ? numerator * numerator / denom : 0.0;
  }
  return out;
}

TrainingSets select_training_sets(const ScoreMap& scores, const HsiCube& cube,
                                  std::size_t n_target, double bg_fraction) {
  const std::size_t n = cube.pixel_count();
  if (scores.width() != cube.width() || scores.height() != cube.height()) {
    throw DimensionError("score map shape does not match cube");
  }
  if (n_target < 1) throw InvalidArgument("n_target must be at least 1");
  if (!(bg_fraction > 0.0 && bg_fraction < 1.0)) throw InvalidArgument("bg_fraction must lie in (0, 1)");
  const auto n_background = static_cast<std::size_t>(std::floor(bg_fraction * static_cast<double>(n)));
  if (n_target + n_background > n) {
    throw InvalidArgument("requested " + std::to_string(n_target) + " target + " +
                          std::to_string(n_background) + " background samples from " +
                          std::to_string(n) + " pixels; the sets would overlap");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  TrainingSets sets;
  sets.background_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_background));
  sets.target_indices.assign(order.rbegin(), order.rbegin() + static_cast<std::ptrdiff_t>(n_target));

  const Eigen::MatrixXd pixels = cube.pixel_matrix();
  auto gather = [&](const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd m(pixels.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j)
      m.col(static_cast<Eigen::Index>(j)) = pixels.col(static_cast<Eigen::Index>(idx[j]));
    return m;
  };
  sets.target_samples = gather(sets.target_indices);
  sets.background_samples = gather(sets.background_indices);
  return sets;
}

}  // namespace wshr
