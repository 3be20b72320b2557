#pragma once

#include <cstddef>
#include <functional>
#include <string_view>

#include "wshr/config.hpp"
#include "wshr/cube.hpp"
#include "wshr/dictlearn.hpp"

namespace wshr {

/// Per-pixel background atoms (bands x atoms, unit columns). Must be safe to
/// call concurrently.
using BackgroundProvider = std::function<Eigen::MatrixXd(std::size_t x, std::size_t y)>;

struct ResidualMaps {
  ScoreMap target;      ///< r_t = ||x - D_t a_t||
  ScoreMap background;  ///< r_b = ||x - D_b a_b||
};

/// Codes every pixel independently against the target dictionary and against
/// its own background dictionary.
ResidualMaps residual_maps(const HsiCube& cube, const Dictionary& target,
                           const BackgroundProvider& background, const SolverParams& params,
                           std::size_t threads = 1);

struct NormalizedScores {
  ScoreMap target;      ///< (r_t - min) / (max - min)
  ScoreMap background;  ///< (max - r_b) / (max - min)
};

/// Min-max normalization of both residual maps. A flat map normalizes to 0.5
/// everywhere.
NormalizedScores normalize_scores(const ScoreMap& r_t, const ScoreMap& r_b);

/// (1 - gamma) * S_t + gamma * S_b, pointwise.
ScoreMap fuse_scores(const ScoreMap& s_t, const ScoreMap& s_b, double gamma);

/// Normalizes, orients and fuses a pair of residual maps.
ScoreMap score_from_residuals(const ResidualMaps& residuals, double gamma, ScoreOrientation orientation);

/// Global dictionaries plus hierarchical per-pixel residuals; shared by
/// W-SHR and SHR, which differ only in the fusion weight.
ResidualMaps hierarchical_residuals(const HsiCube& cube, const Spectrum& signature,
                                    const DetectorConfig& config);

ScoreMap wshr_detect(const HsiCube& cube, const Spectrum& signature, const DetectorConfig& config);

/// Equal-weight fusion (gamma = 0.5) of the same residuals W-SHR uses.
inline constexpr double kShrGamma = 0.5;
ScoreMap shr_detect(const HsiCube& cube, const Spectrum& signature, const DetectorConfig& config);

/// Sparse representation baseline: each pixel is coded jointly against
/// [D_t, local ring atoms]; the score is r_b - r_t computed from the two
/// halves of the joint code.
ScoreMap std_detect(const HsiCube& cube, const Spectrum& signature, const DetectorConfig& config);
ScoreMap std_scores(const HsiCube& cube, const Dictionary& target, const DetectorConfig& config);

enum class Method { kCem, kAce, kStd, kShr, kWshr };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

ScoreMap detect(Method method, const HsiCube& cube, const Spectrum& signature, const DetectorConfig& config);

}  // namespace wshr
