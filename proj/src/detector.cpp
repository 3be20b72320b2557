#include "wshr/detector.hpp"

#include <algorithm>
#include <string>

#include "wshr/error.hpp"
#include "wshr/hierdict.hpp"
#include "wshr/log.hpp"
#include "wshr/parallel.hpp"
#include "wshr/predetect.hpp"

namespace wshr {

ResidualMaps residual_maps(const HsiCube& cube, const Dictionary& target,
                           const BackgroundProvider& background, const SolverParams& params,
                           std::size_t threads) {
  params.validate();
  if (target.bands() != cube.bands()) throw DimensionError("target dictionary band count does not match cube");
  const std::size_t width = cube.width();
  ResidualMaps out{ScoreMap(width, cube.height()), ScoreMap(width, cube.height())};
  const Eigen::MatrixXd pixels = cube.pixel_matrix();

  parallel_for(cube.pixel_count(), threads, [&](std::size_t i) {
    const Spectrum x = pixels.col(static_cast<Eigen::Index>(i));
    const SparseCode code_t = sparse_code(x, target, params);
    out.target[i] = residual_norm(x, target, code_t);

    const Eigen::MatrixXd d_b = background(i % width, i / width);
    if (static_cast<std::size_t>(d_b.rows()) != cube.bands()) {
      throw DimensionError("background dictionary band count does not match cube");
    }
    const SparseCode code_b = sparse_code(x, d_b, params);
    out.background[i] = residual_norm(x, d_b, code_b);
  });
  return out;
}

NormalizedScores normalize_scores(const ScoreMap& r_t, const ScoreMap& r_b) {
  if (!r_t.same_shape(r_b)) throw DimensionError("residual maps differ in shape");
  auto scale = [](const ScoreMap& r, bool reversed) {
    const auto [lo_it, hi_it] = std::minmax_element(r.values().begin(), r.values().end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    ScoreMap s(r.width(), r.height(), 0.5);
    if (!(hi > lo)) return s;
    const double range = hi - lo;
    for (std::size_t i = 0; i < r.size(); ++i) s[i] = reversed ? (hi - r[i]) / range : (r[i] - lo) / range;
    return s;
  };
  return {scale(r_t, false), scale(r_b, true)};
}

ScoreMap fuse_scores(const ScoreMap& s_t, const ScoreMap& s_b, double gamma) {
  if (!s_t.same_shape(s_b)) throw DimensionError("score maps differ in shape");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in [0, 1]");
  ScoreMap s(s_t.width(), s_t.height());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = (1.0 - gamma) * s_t[i] + gamma * s_b[i];
  return s;
}

ScoreMap score_from_residuals(const ResidualMaps& residuals, double gamma, ScoreOrientation orientation) {
  auto normalized = normalize_scores(residuals.target, residuals.background);
  if (orientation == ScoreOrientation::kTargetHigh) {
    for (auto* map : {&normalized.target, &normalized.background})
      for (auto& v : map->values()) v = 1.0 - v;
  }
  return fuse_scores(normalized.target, normalized.background, gamma);
}

ResidualMaps hierarchical_residuals(const HsiCube& cube, const Spectrum& signature,
                                    const DetectorConfig& config) {
  config.validate();
  check_signature(signature, cube.bands());
  auto globals = learn_global_dictionaries(cube, signature, config);
  logger().info("global dictionaries: {} target atoms, {} background atoms",
                globals.target.atom_count(), globals.background.atom_count());
  const HierarchicalBackground provider(cube, std::move(globals.background), config.window);
  return residual_maps(
      cube, globals.target, [&](std::size_t x, std::size_t y) { return provider.dictionary_at(x, y); },
      config.solver_params(), config.threads);
}

ScoreMap wshr_detect(const HsiCube& cube, const Spectrum& signature, const DetectorConfig& config) {
  return score_from_residuals(hierarchical_residuals(cube, signature, config), config.gamma, config.orientation);
}

ScoreMap shr_detect(const HsiCube& cube, const Spectrum& signature, const DetectorConfig& config) {
  return score_from_residuals(hierarchical_residuals(cube, signature, config), kShrGamma, config.orientation);
}

ScoreMap std_scores(const HsiCube& cube, const Dictionary& target, const DetectorConfig& config) {
  config.validate();
  if (target.bands() != cube.bands()) throw DimensionError("target dictionary band count does not match cube");
  const HierarchicalBackground local(cube, Dictionary(cube.bands()), config.window);
  const SolverParams params = config.solver_params();
  const Eigen::MatrixXd pixels = cube.pixel_matrix();
  const std::size_t width = cube.width();
  const auto n_target = static_cast<Eigen::Index>(target.atom_count());
  ScoreMap out(width, cube.height());

  parallel_for(cube.pixel_count(), config.threads, [&](std::size_t i) {
    const Spectrum x = pixels.col(static_cast<Eigen::Index>(i));
    const Eigen::MatrixXd ring = local.dictionary_at(i % width, i / width);
    Eigen::MatrixXd joint(x.size(), n_target + ring.cols());
    joint << target.matrix(), ring;
    const SparseCode code = sparse_code(x, joint, params);

    Eigen::VectorXd recon_t = Eigen::VectorXd::Zero(x.size());
    Eigen::VectorXd recon_b = Eigen::VectorXd::Zero(x.size());
    for (std::size_t p = 0; p < code.indices.size(); ++p) {
      const auto j = static_cast<Eigen::Index>(code.indices[p]);
      if (j < n_target) recon_t += code.coefficients[p] * joint.col(j);
      else recon_b += code.coefficients[p] * joint.col(j);
    }
    out[i] = (x - recon_b).norm() - (x - recon_t).norm();
  });
  return out;
}

ScoreMap std_detect(const HsiCube& cube, const Spectrum& signature, const DetectorConfig& config) {
  check_signature(signature, cube.bands());
  return std_scores(cube, learn_target_dictionary(cube, signature, config), config);
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kCem: return "cem";
    case Method::kAce: return "ace";
    case Method::kStd: return "std";
    case Method::kShr: return "shr";
    case Method::kWshr: return "wshr";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (auto m : {Method::kCem, Method::kAce, Method::kStd, Method::kShr, Method::kWshr})
    if (to_string(m) == name) return m;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

ScoreMap detect(Method method, const HsiCube& cube, const Spectrum& signature, const DetectorConfig& config) {
  switch (method) {
    case Method::kCem: return cem_detect(cube, signature);
    case Method::kAce: return ace_detect(cube, signature);
    case Method::kStd: return std_detect(cube, signature, config);
    case Method::kShr: return shr_detect(cube, signature, config);
    case Method::kWshr: return wshr_detect(cube, signature, config);
  }
  throw InvalidArgument("unknown method");
}

}  // namespace wshr
