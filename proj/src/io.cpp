#include "wshr/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "wshr/error.hpp"

namespace wshr::io {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little,
              "raw cube I/O assumes a little-endian host");

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::size_t parse_size(const std::string& key, const std::string& text) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw IoError("header field '" + key + "' is not a count: " + text);
  return value;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

fs::path raw_path_for(const fs::path& header_path) {
  auto raw = header_path;
  raw.replace_extension(".raw");
  return raw;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw NumericError("cannot format value");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  const auto t = trim(text);
  double value = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc() || ptr != end || t.empty()) throw IoError("not a number: '" + t + "'");
  return value;
}

HsiCube load_cube(const fs::path& header_path) {
  auto in = open_in(header_path);
  std::map<std::string, std::string> fields;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto sep = line.find_first_of(":=");
    if (sep == std::string::npos) throw IoError("malformed header line: " + line);
    fields[lower(trim(line.substr(0, sep)))] = lower(trim(line.substr(sep + 1)));
  }
  for (const char* key : {"width", "height", "bands"}) {
    if (!fields.contains(key)) throw IoError(std::string("header missing '") + key + "'");
  }
  const std::size_t width = parse_size("width", fields["width"]);
  const std::size_t height = parse_size("height", fields["height"]);
  const std::size_t bands = parse_size("bands", fields["bands"]);
  if (fields.contains("dtype") && fields["dtype"] != "float32") {
    throw IoError("unsupported dtype '" + fields["dtype"] + "', only float32 is supported");
  }
  if (fields.contains("byte_order") && fields["byte_order"] != "little" && fields["byte_order"] != "0") {
    throw IoError("unsupported byte order '" + fields["byte_order"] + "'");
  }
  Interleave interleave = Interleave::kBsq;
  if (fields.contains("interleave")) {
    if (fields["interleave"] == "bil") {
      interleave = Interleave::kBil;
    } else if (fields["interleave"] != "bsq") {
      throw IoError("unsupported interleave '" + fields["interleave"] + "'");
    }
  }
  if (width == 0 || height == 0 || bands == 0) throw DimensionError("header declares an empty cube");

  const auto raw_path = raw_path_for(header_path);
  if (!fs::exists(raw_path)) throw IoError("missing raw data file " + raw_path.string());
  const std::size_t count = width * height * bands;
  const auto file_size = fs::file_size(raw_path);
  if (file_size != count * sizeof(float)) {
    throw IoError("size mismatch: header implies " + std::to_string(count * sizeof(float)) +
                  " bytes, " + raw_path.string() + " has " + std::to_string(file_size));
  }
  std::vector<float> raw(count);
  auto rin = open_in(raw_path, std::ios::binary);
  rin.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * sizeof(float)));
  if (!rin) throw IoError("short read from " + raw_path.string());

  HsiCube cube(width, height, bands);
  auto data = cube.data();
  const std::size_t n = width * height;
  if (interleave == Interleave::kBsq) {
    std::copy(raw.begin(), raw.end(), data.begin());
  } else {
    // BIL: for each row, every band's row of samples in turn.
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t b = 0; b < bands; ++b)
        for (std::size_t x = 0; x < width; ++x)
          data[b * n + y * width + x] = raw[(y * bands + b) * width + x];
  }
  cube.check_finite();
  return cube;
}

void save_cube(const HsiCube& cube, const fs::path& header_path, Interleave interleave) {
  const std::size_t width = cube.width();
  const std::size_t height = cube.height();
  const std::size_t bands = cube.bands();
  const std::size_t n = width * height;
  std::vector<float> raw(n * bands);
  const auto data = cube.data();
  if (interleave == Interleave::kBsq) {
    std::transform(data.begin(), data.end(), raw.begin(), [](double v) { return static_cast<float>(v); });
  } else {
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t b = 0; b < bands; ++b)
        for (std::size_t x = 0; x < width; ++x)
          raw[(y * bands + b) * width + x] = static_cast<float>(data[b * n + y * width + x]);
  }

  auto hdr = open_out(header_path);
  hdr << "width: " << width << "\nheight: " << height << "\nbands: " << bands
      << "\ndtype: float32\ninterleave: " << (interleave == Interleave::kBsq ? "bsq" : "bil")
      << "\nbyte_order: little\n";
  finish(hdr, header_path);

  const auto raw_path = raw_path_for(header_path);
  auto out = open_out(raw_path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(float)));
  finish(out, raw_path);
}

void save_scoremap(const ScoreMap& map, const fs::path& base) {
  auto f32_path = base;
  f32_path.replace_extension(".f32");
  auto csv_path = base;
  csv_path.replace_extension(".csv");

  std::vector<float> raster(map.size());
  std::transform(map.values().begin(), map.values().end(), raster.begin(),
                 [](double v) { return static_cast<float>(v); });
  auto out = open_out(f32_path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size() * sizeof(float)));
  finish(out, f32_path);

  auto csv = open_out(csv_path);
  csv << "x,y,score\n";
  for (std::size_t y = 0; y < map.height(); ++y)
    for (std::size_t x = 0; x < map.width(); ++x)
      csv << x << ',' << y << ',' << format_double(map(x, y)) << '\n';
  finish(csv, csv_path);
}

ScoreMap load_scoremap(const fs::path& path) {
  auto csv_path = path;
  csv_path.replace_extension(".csv");
  auto in = open_in(csv_path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,y,score") {
    throw IoError(csv_path.string() + ": expected 'x,y,score' header");
  }
  struct Row {
    std::size_t x, y;
    double score;
  };
  std::vector<Row> rows;
  std::size_t width = 0, height = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw IoError(csv_path.string() + ": malformed row '" + line + "'");
    Row r{parse_size("x", cells[0]), parse_size("y", cells[1]), parse_double(cells[2])};
    width = std::max(width, r.x + 1);
    height = std::max(height, r.y + 1);
    rows.push_back(r);
  }
  if (rows.empty()) throw IoError(csv_path.string() + ": no score rows");
  if (rows.size() != width * height) {
    throw DimensionError(csv_path.string() + ": " + std::to_string(rows.size()) +
                         " rows do not cover a " + std::to_string(width) + "x" +
                         std::to_string(height) + " grid");
  }
  ScoreMap map(width, height, std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> seen(width * height, false);
  for (const auto& r : rows) {
    const std::size_t i = r.y * width + r.x;
    if (seen[i]) throw IoError(csv_path.string() + ": duplicate pixel row");
    seen[i] = true;
    map[i] = r.score;
  }
  return map;
}

GroundTruthMask load_mask(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::uint8_t> labels;
  std::size_t width = 0, height = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto row = trim(line);
    if (row.empty()) continue;
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw IoError(path.string() + ": row " + std::to_string(height) + " has " +
                    std::to_string(row.size()) + " cells, expected " + std::to_string(width));
    }
    for (char c : row) {
      if (c != '0' && c != '1') throw IoError(path.string() + ": invalid mask character '" + c + "'");
      labels.push_back(c == '1' ? 1 : 0);
    }
    ++height;
  }
  if (height == 0) throw IoError(path.string() + ": empty mask");
  return GroundTruthMask(width, height, std::move(labels));
}

void save_mask(const GroundTruthMask& mask, const fs::path& path) {
  auto out = open_out(path);
  for (std::size_t y = 0; y < mask.height(); ++y) {
    for (std::size_t x = 0; x < mask.width(); ++x) out << (mask.is_target(x, y) ? '1' : '0');
    out << '\n';
  }
  finish(out, path);
}

Spectrum load_signature(const fs::path& path) {
  auto in = open_in(path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    values.push_back(parse_double(line));
  }
  if (values.empty()) throw IoError(path.string() + ": empty signature");
  return Eigen::Map<Spectrum>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void save_signature(const Spectrum& signature, const fs::path& path) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < signature.size(); ++i) out << format_double(signature[i]) << '\n';
  finish(out, path);
}

Dictionary load_dictionary(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty dictionary file");
  const auto head = split_csv(line);
  if (head.size() != 2) throw IoError(path.string() + ": expected 'atoms,bands' header");
  const std::size_t atoms = parse_size("atoms", head[0]);
  const std::size_t bands = parse_size("bands", head[1]);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(bands), static_cast<Eigen::Index>(atoms));
  for (std::size_t b = 0; b < bands; ++b) {
    if (!std::getline(in, line)) throw IoError(path.string() + ": missing band row " + std::to_string(b));
    const auto cells = split_csv(line);
    if (cells.size() != atoms) throw DimensionError(path.string() + ": band row " + std::to_string(b) + " has wrong atom count");
    for (std::size_t j = 0; j < atoms; ++j)
      m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) = parse_double(cells[j]);
  }
  return Dictionary(std::move(m));
}

void save_dictionary(const Dictionary& dictionary, const fs::path& path) {
  auto out = open_out(path);
  const auto& m = dictionary.matrix();
  out << m.cols() << ',' << m.rows() << '\n';
  for (Eigen::Index b = 0; b < m.rows(); ++b) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(b, j));
    }
    out << '\n';
  }
  finish(out, path);
}

}  // namespace wshr::io
