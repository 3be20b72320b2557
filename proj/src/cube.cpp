#include "wshr/cube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wshr/error.hpp"

namespace wshr {

namespace {

void check_dims(std::size_t width, std::size_t height, std::size_t bands) {
  if (width == 0 || height == 0 || bands == 0) {
    throw DimensionError("cube dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height) + "x" + std::to_string(bands));
  }
}

}  // namespace

HsiCube::HsiCube(std::size_t width, std::size_t height, std::size_t bands)
    : width_(width), height_(height), bands_(bands) {
  check_dims(width, height, bands);
  data_.assign(width * height * bands, 0.0);
}

HsiCube::HsiCube(std::size_t width, std::size_t height, std::size_t bands,
                 std::vector<double> data)
    : width_(width), height_(height), bands_(bands), data_(std::move(data)) {
  check_dims(width, height, bands);
  if (data_.size() != width * height * bands) {
    throw DimensionError("cube data holds " + std::to_string(data_.size()) +
                         " values, expected " + std::to_string(width * height * bands));
  }
}

Spectrum HsiCube::pixel_at(std::size_t x, std::size_t y) const {
  if (x >= width_ || y >= height_) {
    throw DimensionError("pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                         ") outside " + std::to_string(width_) + "x" +
                         std::to_string(height_) + " cube");
  }
  return pixel(y * width_ + x);
}

Spectrum HsiCube::pixel(std::size_t index) const {
  const std::size_t n = pixel_count();
  Spectrum s(static_cast<Eigen::Index>(bands_));
  for (std::size_t b = 0; b < bands_; ++b) s[static_cast<Eigen::Index>(b)] = data_[b * n + index];
  return s;
}

Eigen::MatrixXd HsiCube::pixel_matrix() const {
  // BSQ storage is a column-major pixels x bands matrix.
  Eigen::Map<const Eigen::MatrixXd> bsq(data_.data(), static_cast<Eigen::Index>(pixel_count()),
                                        static_cast<Eigen::Index>(bands_));
  return bsq.transpose();
}

void HsiCube::check_finite() const {
  const auto it = std::find_if(data_.begin(), data_.end(), [](double v) { return !std::isfinite(v); });
  if (it == data_.end()) return;
  const auto offset = static_cast<std::size_t>(it - data_.begin());
  const std::size_t n = pixel_count();
  const std::size_t band = offset / n;
  const std::size_t y = (offset % n) / width_;
  const std::size_t x = offset % width_;
  throw NumericError("non-finite value at x=" + std::to_string(x) + " y=" + std::to_string(y) +
                     " band=" + std::to_string(band));
}

Dictionary::Dictionary(std::size_t bands) : atoms_(static_cast<Eigen::Index>(bands), 0) {}

Dictionary::Dictionary(Eigen::MatrixXd atoms) : atoms_(std::move(atoms)) {
  for (Eigen::Index j = 0; j < atoms_.cols(); ++j) {
    const double norm = atoms_.col(j).norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTolerance) {
      throw NumericError("dictionary atom " + std::to_string(j) + " has norm " +
                         std::to_string(norm) + ", expected 1");
    }
  }
}

Dictionary Dictionary::from_columns(Eigen::MatrixXd columns) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    const double norm = columns.col(j).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw NumericError("cannot normalize atom " + std::to_string(j) + " with norm " +
                         std::to_string(norm));
    }
    columns.col(j) /= norm;
  }
  return Dictionary(std::move(columns));
}

ScoreMap::ScoreMap(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(width * height, fill) {
  if (width == 0 || height == 0) throw DimensionError("score map dimensions must be positive");
}

ScoreMap::ScoreMap(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width == 0 || height == 0) throw DimensionError("score map dimensions must be positive");
  if (values_.size() != width * height) {
    throw DimensionError("score map holds " + std::to_string(values_.size()) +
                         " values, expected " + std::to_string(width * height));
  }
}

GroundTruthMask::GroundTruthMask(std::size_t width, std::size_t height)
    : width_(width), height_(height), labels_(width * height, 0) {
  if (width == 0 || height == 0) throw DimensionError("mask dimensions must be positive");
}

GroundTruthMask::GroundTruthMask(std::size_t width, std::size_t height,
                                 std::vector<std::uint8_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  if (width == 0 || height == 0) throw DimensionError("mask dimensions must be positive");
  if (labels_.size() != width * height) {
    throw DimensionError("mask holds " + std::to_string(labels_.size()) + " labels, expected " +
                         std::to_string(width * height));
  }
  for (auto& l : labels_) l = l != 0 ? 1 : 0;
}

std::size_t GroundTruthMask::target_count() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

void check_signature(const Spectrum& signature, std::size_t bands) {
  if (static_cast<std::size_t>(signature.size()) != bands) {
    throw DimensionError("target signature has " + std::to_string(signature.size()) +
                         " bands, cube has " + std::to_string(bands));
  }
  if (!signature.allFinite()) throw NumericError("target signature contains non-finite values");
  if (!(signature.norm() > 0.0)) throw InvalidArgument("target signature has zero norm");
}

}  // namespace wshr
