#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wshr/config.hpp"
#include "wshr/detector.hpp"
#include "wshr/eval.hpp"
#include "wshr/synth.hpp"

namespace wshr {

nlohmann::json to_json(const DetectorConfig& config);
/// Missing keys keep their defaults.
DetectorConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SceneSpec& spec);

/// Runs every method on one scene. Global dictionaries are learned once and
/// shared by STD, SHR and W-SHR; the results equal separate detect() calls.
std::vector<NamedScoreMap> run_methods(const std::vector<Method>& methods, const HsiCube& cube,
                                       const Spectrum& signature, const DetectorConfig& config);

/// Parses "cem,ace,wshr".
std::vector<Method> parse_methods(const std::string& list);

/// Detection, evaluation and file output for one scene: `<method>.f32/.csv`
/// score maps, auc.csv, roc_<method>.csv and roc.svg in `out_dir`.
std::vector<MethodResult> run_comparison(const std::vector<Method>& methods, const HsiCube& cube,
                                         const Spectrum& signature, const GroundTruthMask& truth,
                                         const DetectorConfig& config, const std::filesystem::path& out_dir);

/// ISO-8601 UTC timestamp for manifests.
std::string utc_timestamp();

void write_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace wshr
