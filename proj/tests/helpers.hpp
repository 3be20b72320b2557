#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "wshr/cube.hpp"

namespace testutil {

/// Cube of N(mean, 1) samples, rounded through float32.
inline wshr::HsiCube random_cube(std::size_t w, std::size_t h, std::size_t b, std::uint64_t seed,
                                 double mean = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(mean, 1.0);
  wshr::HsiCube cube(w, h, b);
  for (auto& v : cube.data()) v = static_cast<double>(static_cast<float>(normal(rng)));
  return cube;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("wshr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
