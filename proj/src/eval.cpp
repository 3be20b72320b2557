#include "wshr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "wshr/error.hpp"
#include "wshr/io.hpp"

namespace wshr {

RocCurve roc(const ScoreMap& scores, const GroundTruthMask& truth) {
  if (scores.width() != truth.width() || scores.height() != truth.height()) {
    throw DimensionError("score map and ground-truth mask differ in shape");
  }
  const std::size_t n = scores.size();
  const std::size_t positives = truth.target_count();
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw InvalidArgument("ground truth needs at least one target and one background pixel");
  }
  for (double v : scores.values())
    if (std::isnan(v)) throw NumericError("score map contains NaN");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
  });

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < n;) {
    const double threshold = scores[order[i]];
    for (; i < n && scores[order[i]] == threshold; ++i) {
      if (truth.is_target(order[i])) ++tp;
      else ++fp;
    }
    curve.points.push_back({threshold, static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives)});
  }
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.far - a.far) * (a.pd + b.pd) * 0.5;
  }
  return area;
}

std::vector<MethodResult> compare(const std::vector<NamedScoreMap>& maps, const GroundTruthMask& truth) {
  std::vector<MethodResult> results;
  results.reserve(maps.size());
  for (const auto& m : maps) {
    RocCurve curve = roc(m.scores, truth);
    const double area = auc(curve);
    results.push_back({m.method, area, std::move(curve)});
  }
  std::stable_sort(results.begin(), results.end(), [](const MethodResult& a, const MethodResult& b) {
    return a.auc != b.auc ? a.auc > b.auc : a.method < b.method;
  });
  return results;
}

std::string roc_svg(const std::vector<MethodResult>& results) {
  constexpr int kSize = 400;
  constexpr int kMargin = 40;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize + 2 * kMargin << "\" height=\""
      << kSize + 2 * kMargin << "\">\n";
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t r = 0; r < results.size(); ++r) {
    const char* color = kColors[r % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& p : results[r].curve.points) {
      svg << kMargin + p.far * kSize << ',' << kMargin + (1.0 - p.pd) * kSize << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << kMargin + kSize - 140 << "\" y=\"" << kMargin + kSize - 10 - 16 * static_cast<int>(r)
        << "\" fill=\"" << color << "\" font-size=\"12\">" << results[r].method << " AUC="
        << io::format_double(results[r].auc) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_comparison(const std::vector<MethodResult>& results, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::trunc);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
  };
  {
    auto out = open(dir / "auc.csv");
    out << "method,auc\n";
    for (const auto& r : results) out << r.method << ',' << io::format_double(r.auc) << '\n';
    if (!out) throw IoError("write failed for auc.csv");
  }
  for (const auto& r : results) {
    auto out = open(dir / ("roc_" + r.method + ".csv"));
    out << "threshold,far,pd\n";
    for (const auto& p : r.curve.points)
      out << io::format_double(p.threshold) << ',' << io::format_double(p.far) << ',' << io::format_double(p.pd) << '\n';
    if (!out) throw IoError("write failed for roc_" + r.method + ".csv");
  }
  auto svg = open(dir / "roc.svg");
  svg << roc_svg(results);
}

}  // namespace wshr
