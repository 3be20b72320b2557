#include "wshr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "wshr/error.hpp"

namespace wshr {

namespace {

constexpr double kDominantConcentration = 6.0;
constexpr std::size_t kSmoothingWidth = 5;
constexpr std::size_t kMaxPlacementTries = 100000;

double to_float32(double v) { return static_cast<double>(static_cast<float>(v)); }

/// Smoothed random walk, clipped at zero.
Eigen::VectorXd random_spectrum(std::size_t bands, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> start(0.2, 0.7);
  std::normal_distribution<double> step(0.0, 0.04);
  Eigen::VectorXd walk(static_cast<Eigen::Index>(bands));
  double level = start(rng);
  for (Eigen::Index b = 0; b < walk.size(); ++b) {
    level += step(rng);
    walk[b] = level;
  }
  Eigen::VectorXd smooth(walk.size());
  const auto half = static_cast<Eigen::Index>(kSmoothingWidth / 2);
  for (Eigen::Index b = 0; b < walk.size(); ++b) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, b - half);
    const Eigen::Index hi = std::min<Eigen::Index>(walk.size() - 1, b + half);
    smooth[b] = std::max(0.0, walk.segment(lo, hi - lo + 1).mean());
  }
  return smooth.unaryExpr(&to_float32);
}

struct Block {
  std::size_t x, y;
};

std::vector<Block> place_targets(const SceneSpec& spec, std::mt19937_64& rng) {
  const std::size_t side = spec.target_size;
  std::size_t x_lo = 0, y_lo = 0, x_hi = spec.width - side, y_hi = spec.height - side;
  if (spec.cluster_side > 0) {
    x_lo = (spec.width - spec.cluster_side) / 2;
    y_lo = (spec.height - spec.cluster_side) / 2;
    x_hi = x_lo + spec.cluster_side - side;
    y_hi = y_lo + spec.cluster_side - side;
  }
  std::uniform_int_distribution<std::size_t> ux(x_lo, x_hi);
  std::uniform_int_distribution<std::size_t> uy(y_lo, y_hi);

  // Blocks keep a one-pixel gap so each implant stays a separate object.
  auto clash = [&](const Block& a, const Block& b) {
    return a.x < b.x + side + 1 && b.x < a.x + side + 1 && a.y < b.y + side + 1 && b.y < a.y + side + 1;
  };
  std::vector<Block> blocks;
  for (std::size_t tries = 0; blocks.size() < spec.n_targets; ++tries) {
    if (tries >= kMaxPlacementTries) {
      throw InvalidArgument("cannot place " + std::to_string(spec.n_targets) + " separated targets in scene");
    }
    const Block candidate{ux(rng), uy(rng)};
    if (std::none_of(blocks.begin(), blocks.end(), [&](const Block& b) { return clash(candidate, b); }))
      blocks.push_back(candidate);
  }
  return blocks;
}

}  // namespace

void SceneSpec::validate() const {
  if (width == 0 || height == 0 || bands == 0) throw InvalidArgument("scene dimensions must be positive");
  if (n_endmembers < 1) throw InvalidArgument("n_endmembers must be >= 1");
  if (!(target_fill > 0.0 && target_fill <= 1.0)) throw InvalidArgument("target_fill must lie in (0, 1]");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise_sigma must be >= 0");
  if (target_size < 1 || target_size > std::min(width, height)) throw InvalidArgument("invalid target_size");
  if (cluster_side > 0 && (cluster_side < target_size || cluster_side > std::min(width, height))) {
    throw InvalidArgument("invalid cluster_side");
  }
}

Scene generate(const SceneSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const std::size_t w = spec.width;
  const std::size_t h = spec.height;
  const std::size_t n = w * h;
  const auto m = static_cast<Eigen::Index>(spec.bands);
  const auto e = static_cast<Eigen::Index>(spec.n_endmembers);

  Eigen::MatrixXd endmembers(m, e);
  for (Eigen::Index j = 0; j < e; ++j) endmembers.col(j) = random_spectrum(spec.bands, rng);
  Spectrum signature = random_spectrum(spec.bands, rng);
  if (!(signature.norm() > 0.0)) signature.setConstant(to_float32(0.5));

  // Region seeds give each pixel a dominant endmember.
  std::uniform_real_distribution<double> ux(0.0, static_cast<double>(w));
  std::uniform_real_distribution<double> uy(0.0, static_cast<double>(h));
  std::vector<std::pair<double, double>> seeds(static_cast<std::size_t>(e));
  for (auto& s : seeds) s = {ux(rng), uy(rng)};

  std::gamma_distribution<double> unit_gamma(1.0, 1.0);
  std::gamma_distribution<double> dominant_gamma(kDominantConcentration, 1.0);
  Eigen::MatrixXd abundances(e, static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < n; ++p) {
    const double px = static_cast<double>(p % w) + 0.5;
    const double py = static_cast<double>(p / w) + 0.5;
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const double d2 = (seeds[s].first - px) * (seeds[s].first - px) + (seeds[s].second - py) * (seeds[s].second - py);
      if (d2 < best) {
        best = d2;
        nearest = s;
      }
    }
    double total = 0.0;
    for (Eigen::Index j = 0; j < e; ++j) {
      const double g = static_cast<std::size_t>(j) == nearest ? dominant_gamma(rng) : unit_gamma(rng);
      abundances(j, static_cast<Eigen::Index>(p)) = g;
      total += g;
    }
    abundances.col(static_cast<Eigen::Index>(p)) /= total;
  }

  Eigen::MatrixXd pixels = endmembers * abundances;  // bands x pixels

  GroundTruthMask mask(w, h);
  for (const auto& block : place_targets(spec, rng)) {
    for (std::size_t dy = 0; dy < spec.target_size; ++dy) {
      for (std::size_t dx = 0; dx < spec.target_size; ++dx) {
        const std::size_t x = block.x + dx;
        const std::size_t y = block.y + dy;
        mask.set(x, y, true);
        const auto p = static_cast<Eigen::Index>(y * w + x);
        pixels.col(p) = spec.target_fill * signature + (1.0 - spec.target_fill) * pixels.col(p);
      }
    }
  }

  HsiCube cube(w, h, spec.bands);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t b = 0; b < spec.bands; ++b) {
      double v = pixels(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(p));
      if (spec.noise_sigma > 0.0) v += spec.noise_sigma * noise(rng);
      cube.data()[b * n + p] = to_float32(v);
    }
  }
  return Scene{std::move(cube), std::move(mask), std::move(signature), std::move(endmembers),
               std::move(abundances)};
}

std::vector<SceneSpec> preset_scenes() {
  SceneSpec sparse;
  sparse.name = "sparse-targets";
  sparse.width = 40;
  sparse.height = 40;
  sparse.bands = 30;
  sparse.n_endmembers = 4;
  sparse.n_targets = 8;
  sparse.target_size = 1;
  sparse.target_fill = 0.8;
  sparse.noise_sigma = 0.01;
  sparse.seed = 11;

  SceneSpec dense;
  dense.name = "dense-targets";
  dense.width = 36;
  dense.height = 36;
  dense.bands = 30;
  dense.n_endmembers = 4;
  dense.n_targets = 9;
  dense.target_size = 2;
  dense.cluster_side = 12;
  dense.target_fill = 0.8;
  dense.noise_sigma = 0.01;
  dense.seed = 23;

  SceneSpec large;
  large.name = "large";
  large.width = 64;
  large.height = 64;
  large.bands = 40;
  large.n_endmembers = 5;
  large.n_targets = 12;
  large.target_size = 2;
  large.target_fill = 0.7;
  large.noise_sigma = 0.01;
  large.seed = 37;

  return {sparse, dense, large};
}

SceneSpec preset_scene(std::string_view name) {
  for (const auto& spec : preset_scenes())
    if (spec.name == name) return spec;
  throw InvalidArgument("unknown scene preset '" + std::string(name) + "'");
}

}  // namespace wshr
