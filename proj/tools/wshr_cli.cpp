// wshr: synthetic scenes, detection, evaluation and method comparison for
// hyperspectral target detection.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wshr/config.hpp"
#include "wshr/detector.hpp"
#include "wshr/error.hpp"
#include "wshr/eval.hpp"
#include "wshr/experiment.hpp"
#include "wshr/io.hpp"
#include "wshr/log.hpp"
#include "wshr/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Detector flags shared by detect and compare.
struct ConfigFlags {
  std::string dataset;
  std::string orientation;
  wshr::DetectorConfig config;

  void attach(CLI::App& app) {
    app.add_option("--dataset-preset", dataset, "Window/gamma preset: aviris-1, aviris-2, hydice");
    app.add_option("--gamma", config.gamma, "Background-score weight in [0,1]")->capture_default_str();
    app.add_option("--lambda", config.lambda, "L1 weight")->capture_default_str();
    app.add_option("--sparsity", config.sparsity, "Support cap k")->capture_default_str();
    app.add_option("--owr", config.window.outer, "Outer window side (odd)")->capture_default_str();
    app.add_option("--iwr", config.window.inner, "Inner window side (odd)")->capture_default_str();
    app.add_option("--target-atoms", config.n_target_atoms, "Global target dictionary size")->capture_default_str();
    app.add_option("--bg-atoms", config.n_bg_atoms, "Global background dictionary size")->capture_default_str();
    app.add_option("--train-targets", config.n_target_train, "Target training samples")->capture_default_str();
    app.add_option("--bg-fraction", config.bg_fraction, "Background training fraction of all pixels")
        ->capture_default_str();
    app.add_option("--epochs", config.odl_epochs, "Dictionary-learning epochs")->capture_default_str();
    app.add_option("--batch-size", config.odl_batch_size, "Dictionary-learning batch size")->capture_default_str();
    app.add_option("--orientation", orientation, "Score orientation: target-high or literal");
    app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", config.threads, "Worker threads (results do not depend on it)")
        ->capture_default_str();
  }

  /// Applies the dataset preset first, then any explicitly given flag.
  wshr::DetectorConfig resolve(const CLI::App& app) const {
    wshr::DetectorConfig c = config;
    if (!dataset.empty()) {
      const auto preset = wshr::dataset_preset(dataset);
      if (app.count("--owr") == 0) c.window.outer = preset.window.outer;
      if (app.count("--iwr") == 0) c.window.inner = preset.window.inner;
      if (app.count("--gamma") == 0) c.gamma = preset.gamma;
    }
    if (!orientation.empty()) c.orientation = wshr::orientation_from_string(orientation);
    try {
      c.validate();
    } catch (const wshr::InvalidArgument& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

struct SceneFiles {
  fs::path cube, mask, target;
};

SceneFiles write_scene(const wshr::Scene& scene, const fs::path& dir) {
  SceneFiles files{dir / "cube.hdr", dir / "mask.txt", dir / "target.csv"};
  wshr::io::save_cube(scene.cube, files.cube);
  wshr::io::save_mask(scene.mask, files.mask);
  wshr::io::save_signature(scene.signature, files.target);
  return files;
}

void print_table(const std::vector<wshr::MethodResult>& results) {
  std::cout << "method,auc\n";
  for (const auto& r : results) std::cout << r.method << ',' << wshr::io::format_double(r.auc) << '\n';
}

int run_detect(wshr::Method method, const fs::path& cube_path, const fs::path& target_path,
               const wshr::DetectorConfig& config, const fs::path& out) {
  const std::string started = wshr::utc_timestamp();
  const auto cube = wshr::io::load_cube(cube_path);
  const auto signature = wshr::io::load_signature(target_path);
  const auto scores = wshr::detect(method, cube, signature, config);
  const std::string name(wshr::to_string(method));
  wshr::io::save_scoremap(scores, out / name);
  const json manifest{{"command", "detect"},
                      {"method", name},
                      {"config", wshr::to_json(config)},
                      {"inputs", {{"cube", fs::absolute(cube_path).string()}, {"target", fs::absolute(target_path).string()}}},
                      {"outputs", {(out / (name + ".f32")).string(), (out / (name + ".csv")).string()}},
                      {"started_at", started},
                      {"finished_at", wshr::utc_timestamp()}};
  wshr::write_json(manifest, out / "manifest.json");
  std::cout << "wrote " << (out / (name + ".csv")).string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperspectral target detection with weighted sparse hierarchical representation"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene (cube, mask, target signature)");
  std::string synth_preset;
  fs::path synth_out;
  wshr::SceneSpec spec;
  std::uint64_t synth_seed = 0;
  synth->add_option("--preset", synth_preset, "sparse-targets, dense-targets or large");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--width", spec.width)->capture_default_str();
  synth->add_option("--height", spec.height)->capture_default_str();
  synth->add_option("--bands", spec.bands)->capture_default_str();
  synth->add_option("--endmembers", spec.n_endmembers)->capture_default_str();
  synth->add_option("--targets", spec.n_targets)->capture_default_str();
  synth->add_option("--target-size", spec.target_size)->capture_default_str();
  synth->add_option("--cluster-side", spec.cluster_side)->capture_default_str();
  synth->add_option("--fill", spec.target_fill)->capture_default_str();
  synth->add_option("--noise", spec.noise_sigma)->capture_default_str();
  synth->add_option("--seed", synth_seed, "Scene seed (overrides the preset's)");

  // detect
  auto* detect = app.add_subcommand("detect", "Run one detector on a cube");
  std::string method_name;
  fs::path detect_cube, detect_target, detect_out, replay;
  ConfigFlags detect_flags;
  detect->add_option("--method", method_name, "cem, ace, std, shr or wshr");
  detect->add_option("--cube", detect_cube, "Cube header (.hdr)");
  detect->add_option("--target", detect_target, "Target signature CSV");
  detect->add_option("--out", detect_out, "Output directory");
  detect->add_option("--replay", replay, "Re-run a detect manifest.json");
  detect_flags.attach(*detect);

  // eval
  auto* eval = app.add_subcommand("eval", "ROC/AUC of score maps against a mask");
  std::vector<std::string> eval_maps;
  fs::path eval_mask, eval_out;
  eval->add_option("--map", eval_maps, "Score map (.csv or base path); NAME=PATH sets the method name")->required();
  eval->add_option("--mask", eval_mask, "Ground-truth mask")->required();
  eval->add_option("--out", eval_out, "Output directory")->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "Synthesize or load a scene, run several methods, evaluate");
  std::string cmp_preset, cmp_methods = "cem,ace,std,shr,wshr";
  fs::path cmp_cube, cmp_target, cmp_mask, cmp_out;
  std::uint64_t cmp_scene_seed = 0;
  ConfigFlags cmp_flags;
  cmp->add_option("--preset", cmp_preset, "Synthetic scene preset");
  cmp->add_option("--scene-seed", cmp_scene_seed, "Override the preset's scene seed");
  cmp->add_option("--cube", cmp_cube, "Cube header (.hdr) for a real scene");
  cmp->add_option("--target", cmp_target, "Target signature CSV");
  cmp->add_option("--mask", cmp_mask, "Ground-truth mask");
  cmp->add_option("--methods", cmp_methods, "Comma-separated method list")->capture_default_str();
  cmp->add_option("--out", cmp_out, "Output directory")->required();
  cmp_flags.attach(*cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*synth) {
      if (!synth_preset.empty()) {
        const auto name = spec;  // keep flags only when no preset
        (void)name;
        spec = wshr::preset_scene(synth_preset);
      }
      if (synth->count("--seed")) spec.seed = synth_seed;
      const auto scene = wshr::generate(spec);
      const auto files = write_scene(scene, synth_out);
      wshr::write_json({{"command", "synth"}, {"scene", wshr::to_json(spec)}, {"created_at", wshr::utc_timestamp()}},
                       synth_out / "scene.json");
      std::cout << "wrote " << files.cube.string() << ", " << files.mask.string() << ", " << files.target.string()
                << '\n';
      return 0;
    }

    if (*detect) {
      if (!replay.empty()) {
        const json manifest = wshr::read_json(replay);
        const auto config = wshr::config_from_json(manifest.at("config"));
        const fs::path out = detect_out.empty() ? replay.parent_path() : detect_out;
        return run_detect(wshr::method_from_string(manifest.at("method").get<std::string>()),
                          manifest.at("inputs").at("cube").get<std::string>(),
                          manifest.at("inputs").at("target").get<std::string>(), config, out);
      }
      if (method_name.empty() || detect_cube.empty() || detect_target.empty() || detect_out.empty()) {
        throw UsageError("detect needs --method, --cube, --target and --out (or --replay)");
      }
      wshr::Method method;
      try {
        method = wshr::method_from_string(method_name);
      } catch (const wshr::InvalidArgument& e) {
        throw UsageError(e.what());
      }
      return run_detect(method, detect_cube, detect_target, detect_flags.resolve(*detect), detect_out);
    }

    if (*eval) {
      const auto mask = wshr::io::load_mask(eval_mask);
      std::vector<wshr::NamedScoreMap> maps;
      for (const auto& arg : eval_maps) {
        const auto eq = arg.find('=');
        const fs::path path = eq == std::string::npos ? arg : arg.substr(eq + 1);
        const std::string name = eq == std::string::npos ? path.stem().string() : arg.substr(0, eq);
        maps.push_back({name, wshr::io::load_scoremap(path)});
      }
      const auto results = wshr::compare(maps, mask);
      wshr::write_comparison(results, eval_out);
      print_table(results);
      return 0;
    }

    if (*cmp) {
      std::vector<wshr::Method> methods;
      try {
        methods = wshr::parse_methods(cmp_methods);
      } catch (const wshr::InvalidArgument& e) {
        throw UsageError(e.what());
      }
      const auto config = cmp_flags.resolve(*cmp);
      const std::string started = wshr::utc_timestamp();
      json manifest{{"command", "compare"}, {"config", wshr::to_json(config)}};
      json method_names = json::array();
      for (auto m : methods) method_names.push_back(std::string(wshr::to_string(m)));
      manifest["methods"] = method_names;

      std::vector<wshr::MethodResult> results;
      if (!cmp_preset.empty()) {
        auto scene_spec = wshr::preset_scene(cmp_preset);
        if (cmp->count("--scene-seed")) scene_spec.seed = cmp_scene_seed;
        const auto scene = wshr::generate(scene_spec);
        write_scene(scene, cmp_out / "scene");
        manifest["scene"] = wshr::to_json(scene_spec);
        results = wshr::run_comparison(methods, scene.cube, scene.signature, scene.mask, config, cmp_out);
      } else {
        if (cmp_cube.empty() || cmp_target.empty() || cmp_mask.empty()) {
          throw UsageError("compare needs --preset, or --cube, --target and --mask");
        }
        const auto cube = wshr::io::load_cube(cmp_cube);
        const auto signature = wshr::io::load_signature(cmp_target);
        const auto mask = wshr::io::load_mask(cmp_mask);
        manifest["inputs"] = {{"cube", fs::absolute(cmp_cube).string()},
                              {"target", fs::absolute(cmp_target).string()},
                              {"mask", fs::absolute(cmp_mask).string()}};
        results = wshr::run_comparison(methods, cube, signature, mask, config, cmp_out);
      }
      json aucs = json::object();
      for (const auto& r : results) aucs[r.method] = r.auc;
      manifest["auc"] = aucs;
      manifest["started_at"] = started;
      manifest["finished_at"] = wshr::utc_timestamp();
      wshr::write_json(manifest, cmp_out / "manifest.json");
      print_table(results);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}
