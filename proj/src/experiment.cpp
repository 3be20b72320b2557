#include "wshr/experiment.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <algorithm>

#include "wshr/error.hpp"
#include "wshr/hierdict.hpp"
#include "wshr/io.hpp"
#include "wshr/log.hpp"
#include "wshr/predetect.hpp"

namespace wshr {

using nlohmann::json;

json to_json(const DetectorConfig& c) {
  return json{{"lambda", c.lambda},
              {"sparsity", c.sparsity},
              {"gamma", c.gamma},
              {"owr", c.window.outer},
              {"iwr", c.window.inner},
              {"target_atoms", c.n_target_atoms},
              {"bg_atoms", c.n_bg_atoms},
              {"train_targets", c.n_target_train},
              {"bg_fraction", c.bg_fraction},
              {"seed", c.seed},
              {"odl_epochs", c.odl_epochs},
              {"odl_batch_size", c.odl_batch_size},
              {"max_iterations", c.max_iterations},
              {"tolerance", c.tolerance},
              {"exchange_candidates", c.exchange_candidates},
              {"orientation", std::string(to_string(c.orientation))},
              {"threads", c.threads}};
}

DetectorConfig config_from_json(const json& j) {
  DetectorConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("lambda", c.lambda);
  get("sparsity", c.sparsity);
  get("gamma", c.gamma);
  get("owr", c.window.outer);
  get("iwr", c.window.inner);
  get("target_atoms", c.n_target_atoms);
  get("bg_atoms", c.n_bg_atoms);
  get("train_targets", c.n_target_train);
  get("bg_fraction", c.bg_fraction);
  get("seed", c.seed);
  get("odl_epochs", c.odl_epochs);
  get("odl_batch_size", c.odl_batch_size);
  get("max_iterations", c.max_iterations);
  get("tolerance", c.tolerance);
  get("exchange_candidates", c.exchange_candidates);
  get("threads", c.threads);
  if (j.contains("orientation")) c.orientation = orientation_from_string(j.at("orientation").get<std::string>());
  c.validate();
  return c;
}

json to_json(const SceneSpec& s) {
  return json{{"name", s.name},         {"width", s.width},
              {"height", s.height},     {"bands", s.bands},
              {"n_endmembers", s.n_endmembers}, {"n_targets", s.n_targets},
              {"target_size", s.target_size},   {"cluster_side", s.cluster_side},
              {"target_fill", s.target_fill},   {"noise_sigma", s.noise_sigma},
              {"seed", s.seed}};
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> methods;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const Method m = method_from_string(item);
    if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
  }
  if (methods.empty()) throw InvalidArgument("no methods given");
  return methods;
}

std::vector<NamedScoreMap> run_methods(const std::vector<Method>& methods, const HsiCube& cube,
                                       const Spectrum& signature, const DetectorConfig& config) {
  config.validate();
  check_signature(signature, cube.bands());
  const auto wants = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
  const bool hierarchical = wants(Method::kShr) || wants(Method::kWshr);

  std::optional<GlobalDictionaries> globals;
  std::optional<Dictionary> target_only;
  std::optional<ResidualMaps> residuals;
  if (hierarchical) {
    globals = learn_global_dictionaries(cube, signature, config);
    const HierarchicalBackground provider(cube, globals->background, config.window);
    residuals = residual_maps(
        cube, globals->target, [&](std::size_t x, std::size_t y) { return provider.dictionary_at(x, y); },
        config.solver_params(), config.threads);
  } else if (wants(Method::kStd)) {
    target_only = learn_target_dictionary(cube, signature, config);
  }

  std::vector<NamedScoreMap> maps;
  for (Method m : methods) {
    logger().info("running {}", to_string(m));
    switch (m) {
      case Method::kCem: maps.push_back({"cem", cem_detect(cube, signature)}); break;
      case Method::kAce: maps.push_back({"ace", ace_detect(cube, signature)}); break;
      case Method::kStd:
        maps.push_back({"std", std_scores(cube, globals ? globals->target : *target_only, config)});
        break;
      case Method::kShr: maps.push_back({"shr", score_from_residuals(*residuals, kShrGamma, config.orientation)}); break;
      case Method::kWshr:
        maps.push_back({"wshr", score_from_residuals(*residuals, config.gamma, config.orientation)});
        break;
    }
  }
  return maps;
}

std::vector<MethodResult> run_comparison(const std::vector<Method>& methods, const HsiCube& cube,
                                         const Spectrum& signature, const GroundTruthMask& truth,
                                         const DetectorConfig& config, const std::filesystem::path& out_dir) {
  if (truth.width() != cube.width() || truth.height() != cube.height()) {
    throw DimensionError("mask shape does not match cube");
  }
  const auto maps = run_methods(methods, cube, signature, config);
  std::filesystem::create_directories(out_dir);
  for (const auto& m : maps) io::save_scoremap(m.scores, out_dir / m.method);
  auto results = compare(maps, truth);
  write_comparison(results, out_dir);
  return results;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace wshr
