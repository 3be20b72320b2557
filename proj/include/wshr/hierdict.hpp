#pragma once

#include <cstddef>
#include <vector>

#include "wshr/config.hpp"
#include "wshr/cube.hpp"

namespace wshr {

/// Row-major pixel indices of the ring between the outer and inner windows
/// centered at (x, y), both clamped to the image. Scan order is row-major.
std::vector<std::size_t> ring_pixels(std::size_t width, std::size_t height, std::size_t x,
                                     std::size_t y, const WindowSpec& window);

/// Unit-normalized spectra of the ring around (x, y); zero-norm pixels are
/// skipped. Throws InvalidArgument when nothing remains.
Dictionary local_background(const HsiCube& cube, std::size_t x, std::size_t y, const WindowSpec& window);

/// [global, local] with global atoms first. An empty input yields the other
/// input unchanged; both empty throws.
Dictionary build_hierarchical(const Dictionary& global, const Dictionary& local);

/// Divides each column by its Euclidean norm. Zero columns throw.
Dictionary normalize_atoms(const Eigen::MatrixXd& columns);

/// Serves per-pixel hierarchical background dictionaries. Pixel spectra are
/// normalized once up front; each request gathers its ring after the shared
/// global atoms.
class HierarchicalBackground {
 public:
  /// `global` may be empty, which yields local-only dictionaries.
  HierarchicalBackground(const HsiCube& cube, Dictionary global, WindowSpec window);

  /// bands x (global + ring) matrix for pixel (x, y). Falls back to the
  /// global atoms alone when the ring has no usable pixel.
  Eigen::MatrixXd dictionary_at(std::size_t x, std::size_t y) const;
  /// Number of local atoms dictionary_at(x, y) appends.
  std::size_t local_count(std::size_t x, std::size_t y) const;

  const Dictionary& global() const { return global_; }
  const WindowSpec& window() const { return window_; }

 private:
  std::size_t width_;
  std::size_t height_;
  Dictionary global_;
  WindowSpec window_;
  Eigen::MatrixXd unit_pixels_;  // bands x pixels, zero columns where norm was 0
  std::vector<bool> usable_;
};

}  // namespace wshr
