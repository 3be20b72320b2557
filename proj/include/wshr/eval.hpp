#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wshr/cube.hpp"

namespace wshr {

struct RocPoint {
  double threshold;  ///< pixels with score >= threshold are declared targets
  double far;        ///< false-alarm rate
  double pd;         ///< detection probability
};

/// Starts at (0, 0) with threshold +inf and ends at (1, 1).
struct RocCurve {
  std::vector<RocPoint> points;
};

/// Sweeps the threshold over every distinct score, highest first. Pixels with
/// equal scores enter together, giving one point per distinct value.
RocCurve roc(const ScoreMap& scores, const GroundTruthMask& truth);

/// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

struct MethodResult {
  std::string method;
  double auc;
  RocCurve curve;
};

struct NamedScoreMap {
  std::string method;
  ScoreMap scores;
};

/// AUC per method, sorted by descending AUC (ties by name).
std::vector<MethodResult> compare(const std::vector<NamedScoreMap>& maps, const GroundTruthMask& truth);

/// Writes auc.csv (method,auc), roc_<method>.csv (threshold,far,pd) and
/// roc.svg into `dir`.
void write_comparison(const std::vector<MethodResult>& results, const std::filesystem::path& dir);

/// Minimal SVG plot of every curve as a polyline.
std::string roc_svg(const std::vector<MethodResult>& results);

}  // namespace wshr
