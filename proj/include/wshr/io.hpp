#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "wshr/cube.hpp"

namespace wshr::io {

enum class Interleave { kBsq, kBil };

/// Reads `<name>.hdr` plus the sibling `<name>.raw` (little-endian float32).
///
/// The header is plain text, one `key: value` (or `key = value`) per line:
///
///     width: 60
///     height: 60
///     bands: 189
///     dtype: float32
///     interleave: bsq        # or bil
///
/// Blank lines and `#` comments are ignored. The result is always stored
/// band-sequential. Any NaN/Inf sample is rejected with its position.
HsiCube load_cube(const std::filesystem::path& header_path);

/// Writes the header and the `.raw` sibling. Values are narrowed to float32,
/// so the round trip is exact for float32-representable cubes.
void save_cube(const HsiCube& cube, const std::filesystem::path& header_path,
               Interleave interleave = Interleave::kBsq);

/// `<base>.f32` raw row-major float32 raster plus `<base>.csv` with
/// `x,y,score` rows. The CSV carries full double precision.
void save_scoremap(const ScoreMap& map, const std::filesystem::path& base);
/// Reads the `.csv` written by save_scoremap (the path may name either file
/// or the extensionless base).
ScoreMap load_scoremap(const std::filesystem::path& path);

/// ASCII grid, one row per line, characters '0'/'1'.
GroundTruthMask load_mask(const std::filesystem::path& path);
void save_mask(const GroundTruthMask& mask, const std::filesystem::path& path);

/// Single-column CSV, one band value per line.
Spectrum load_signature(const std::filesystem::path& path);
void save_signature(const Spectrum& signature, const std::filesystem::path& path);

/// First row `atoms,bands`, then `bands` rows of `atoms` comma-separated
/// values (one atom per column).
Dictionary load_dictionary(const std::filesystem::path& path);
void save_dictionary(const Dictionary& dictionary, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace wshr::io
