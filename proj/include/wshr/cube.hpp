#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace wshr {

/// A single pixel spectrum (one value per band).
using Spectrum = Eigen::VectorXd;

/// Hyperspectral cube held in band-sequential order:
/// value(x, y, b) = data[b * width * height + y * width + x].
class HsiCube {
 public:
  HsiCube(std::size_t width, std::size_t height, std::size_t bands);
  HsiCube(std::size_t width, std::size_t height, std::size_t bands,
          std::vector<double> data);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t bands() const { return bands_; }
  std::size_t pixel_count() const { return width_ * height_; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double at(std::size_t x, std::size_t y, std::size_t band) const {
    return data_[band * pixel_count() + y * width_ + x];
  }
  double& at(std::size_t x, std::size_t y, std::size_t band) {
    return data_[band * pixel_count() + y * width_ + x];
  }

  /// Bounds-checked copy of the spectrum at column x, row y.
  Spectrum pixel_at(std::size_t x, std::size_t y) const;
  /// Spectrum of the pixel with row-major index i = y * width + x.
  Spectrum pixel(std::size_t index) const;

  /// bands x pixels matrix, one column per pixel in row-major pixel order.
  Eigen::MatrixXd pixel_matrix() const;

  /// Throws NumericError naming the first non-finite sample.
  void check_finite() const;

  friend bool operator==(const HsiCube&, const HsiCube&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::size_t bands_;
  std::vector<double> data_;
};

/// bands x atoms matrix whose columns are unit-norm atoms. A dictionary with
/// zero atoms is allowed and reports empty().
class Dictionary {
 public:
  explicit Dictionary(std::size_t bands = 0);
  /// Takes ownership of already-normalized atoms; rejects zero or
  /// non-unit columns.
  explicit Dictionary(Eigen::MatrixXd atoms);

  /// Normalizes every column to unit Euclidean norm. Zero columns throw.
  static Dictionary from_columns(Eigen::MatrixXd columns);

  std::size_t bands() const { return static_cast<std::size_t>(atoms_.rows()); }
  std::size_t atom_count() const { return static_cast<std::size_t>(atoms_.cols()); }
  bool empty() const { return atoms_.cols() == 0; }

  const Eigen::MatrixXd& matrix() const { return atoms_; }
  auto atom(std::size_t j) const { return atoms_.col(static_cast<Eigen::Index>(j)); }

  static constexpr double kNormTolerance = 1e-9;

  friend bool operator==(const Dictionary& a, const Dictionary& b) {
    return a.atoms_.rows() == b.atoms_.rows() && a.atoms_.cols() == b.atoms_.cols() &&
           a.atoms_ == b.atoms_;
  }

 private:
  Eigen::MatrixXd atoms_;
};

/// One scalar per pixel, row-major.
class ScoreMap {
 public:
  ScoreMap(std::size_t width, std::size_t height, double fill = 0.0);
  ScoreMap(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double operator()(std::size_t x, std::size_t y) const { return values_[y * width_ + x]; }
  double& operator()(std::size_t x, std::size_t y) { return values_[y * width_ + x]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool same_shape(const ScoreMap& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ScoreMap&, const ScoreMap&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> values_;
};

/// Binary per-pixel labels, row-major; 1 marks a target pixel.
class GroundTruthMask {
 public:
  GroundTruthMask(std::size_t width, std::size_t height);
  GroundTruthMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> labels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return labels_.size(); }

  bool is_target(std::size_t i) const { return labels_[i] != 0; }
  bool is_target(std::size_t x, std::size_t y) const { return labels_[y * width_ + x] != 0; }
  void set(std::size_t x, std::size_t y, bool target) { labels_[y * width_ + x] = target ? 1 : 0; }

  std::size_t target_count() const;
  std::span<const std::uint8_t> labels() const { return labels_; }

  friend bool operator==(const GroundTruthMask&, const GroundTruthMask&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> labels_;
};

/// Validates a target signature against a band count: correct length, finite,
/// nonzero norm.
void check_signature(const Spectrum& signature, std::size_t bands);

}  // namespace wshr
