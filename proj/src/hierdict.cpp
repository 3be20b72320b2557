#include "wshr/hierdict.hpp"

#include <algorithm>
#include <string>

#include "wshr/error.hpp"
#include "wshr/log.hpp"

namespace wshr {

std::vector<std::size_t> ring_pixels(std::size_t width, std::size_t height, std::size_t x,
                                     std::size_t y, const WindowSpec& window) {
  window.validate();
  if (x >= width || y >= height) throw DimensionError("window center outside image");
  const std::size_t outer = window.outer / 2;
  const std::size_t inner = window.inner / 2;
  const std::size_t x0 = x >= outer ? x - outer : 0;
  const std::size_t y0 = y >= outer ? y - outer : 0;
  const std::size_t x1 = std::min(width - 1, x + outer);
  const std::size_t y1 = std::min(height - 1, y + outer);

  std::vector<std::size_t> ring;
  ring.reserve((x1 - x0 + 1) * (y1 - y0 + 1));
  for (std::size_t yy = y0; yy <= y1; ++yy) {
    const std::size_t dy = yy > y ? yy - y : y - yy;
    for (std::size_t xx = x0; xx <= x1; ++xx) {
      const std::size_t dx = xx > x ? xx - x : x - xx;
      if (dx <= inner && dy <= inner) continue;
      ring.push_back(yy * width + xx);
    }
  }
  return ring;
}

Dictionary normalize_atoms(const Eigen::MatrixXd& columns) { return Dictionary::from_columns(columns); }

Dictionary local_background(const HsiCube& cube, std::size_t x, std::size_t y, const WindowSpec& window) {
  const auto ring = ring_pixels(cube.width(), cube.height(), x, y, window);
  Eigen::MatrixXd atoms(static_cast<Eigen::Index>(cube.bands()), static_cast<Eigen::Index>(ring.size()));
  Eigen::Index kept = 0;
  for (auto p : ring) {
    const Spectrum s = cube.pixel(p);
    if (!(s.squaredNorm() > 0.0)) continue;
    atoms.col(kept++) = s;
  }
  if (kept == 0) {
    throw InvalidArgument("local background at (" + std::to_string(x) + ", " + std::to_string(y) +
                          ") has no nonzero pixels");
  }
  atoms.conservativeResize(Eigen::NoChange, kept);
  return normalize_atoms(atoms);
}

Dictionary build_hierarchical(const Dictionary& global, const Dictionary& local) {
  if (global.empty() && local.empty()) throw InvalidArgument("both background dictionaries are empty");
  if (local.empty()) {
    logger().debug("empty local dictionary, using global atoms only");
    return global;
  }
  if (global.empty()) return local;
  if (global.bands() != local.bands()) {
    throw DimensionError("global dictionary has " + std::to_string(global.bands()) +
                         " bands, local has " + std::to_string(local.bands()));
  }
  Eigen::MatrixXd joined(static_cast<Eigen::Index>(global.bands()),
                         static_cast<Eigen::Index>(global.atom_count() + local.atom_count()));
  joined << global.matrix(), local.matrix();
  return Dictionary(std::move(joined));
}

HierarchicalBackground::HierarchicalBackground(const HsiCube& cube, Dictionary global, WindowSpec window)
    : width_(cube.width()),
      height_(cube.height()),
      global_(std::move(global)),
      window_(window),
      unit_pixels_(cube.pixel_matrix()),
      usable_(cube.pixel_count(), false) {
  window_.validate();
  if (!global_.empty() && global_.bands() != cube.bands()) {
    throw DimensionError("global dictionary band count does not match cube");
  }
  for (Eigen::Index p = 0; p < unit_pixels_.cols(); ++p) {
    const double norm = unit_pixels_.col(p).norm();
    if (norm > 0.0) {
      unit_pixels_.col(p) /= norm;
      usable_[static_cast<std::size_t>(p)] = true;
    }
  }
}

std::size_t HierarchicalBackground::local_count(std::size_t x, std::size_t y) const {
  const auto ring = ring_pixels(width_, height_, x, y, window_);
  return static_cast<std::size_t>(std::count_if(ring.begin(), ring.end(), [&](std::size_t p) { return usable_[p]; }));
}

Eigen::MatrixXd HierarchicalBackground::dictionary_at(std::size_t x, std::size_t y) const {
  const auto ring = ring_pixels(width_, height_, x, y, window_);
  const auto n_global = static_cast<Eigen::Index>(global_.atom_count());
  Eigen::MatrixXd atoms(unit_pixels_.rows(), n_global + static_cast<Eigen::Index>(ring.size()));
  if (n_global > 0) atoms.leftCols(n_global) = global_.matrix();
  Eigen::Index col = n_global;
  for (auto p : ring)
    if (usable_[p]) atoms.col(col++) = unit_pixels_.col(static_cast<Eigen::Index>(p));
  if (col == 0) {
    throw InvalidArgument("no background atoms available at (" + std::to_string(x) + ", " +
                          std::to_string(y) + ")");
  }
  if (col == n_global) logger().debug("empty local dictionary at ({}, {}), using global atoms only", x, y);
  atoms.conservativeResize(Eigen::NoChange, col);
  return atoms;
}

}  // namespace wshr
