#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wshr/cube.hpp"

namespace wshr {

/// Linear-mixing-model scene description.
struct SceneSpec {
  std::string name = "custom";
  std::size_t width = 40;
  std::size_t height = 40;
  std::size_t bands = 30;
  std::size_t n_endmembers = 3;
  /// Number of implanted targets; each is a target_size x target_size block.
  std::size_t n_targets = 6;
  std::size_t target_size = 1;
  /// 0 scatters targets over the whole image; otherwise they are packed into
  /// a centered cluster_side x cluster_side region.
  std::size_t cluster_side = 0;
  double target_fill = 0.8;
  double noise_sigma = 0.01;
  std::uint64_t seed = 1;

  void validate() const;
  std::size_t target_pixel_count() const { return n_targets * target_size * target_size; }
};

struct Scene {
  HsiCube cube;
  GroundTruthMask mask;
  Spectrum signature;
  Eigen::MatrixXd endmembers;  ///< bands x n_endmembers
  Eigen::MatrixXd abundances;  ///< n_endmembers x pixels, background mixture per pixel
};

/// Background pixel = endmembers * Dirichlet abundances (spatially coherent:
/// each pixel favors the endmember of its nearest region seed). Target pixel
/// = fill * d + (1 - fill) * its background mixture. Gaussian noise is added
/// last and all spectra are rounded to float32 so the scene survives a cube
/// file round trip unchanged.
Scene generate(const SceneSpec& spec);

/// "sparse-targets", "dense-targets" and "large", each with a fixed seed.
std::vector<SceneSpec> preset_scenes();
SceneSpec preset_scene(std::string_view name);

}  // namespace wshr
