#include "wshr/config.hpp"

#include <cmath>
#include <string>

#include "wshr/error.hpp"

namespace wshr {

void WindowSpec::validate() const {
  if (outer % 2 == 0 || inner % 2 == 0) throw InvalidArgument("window sides must be odd");
  if (inner < 1 || outer <= inner) throw InvalidArgument("window requires outer > inner >= 1");
}

std::string_view to_string(ScoreOrientation o) {
  return o == ScoreOrientation::kLiteral ? "literal" : "target-high";
}

ScoreOrientation orientation_from_string(std::string_view name) {
  if (name == "literal") return ScoreOrientation::kLiteral;
  if (name == "target-high") return ScoreOrientation::kTargetHigh;
  throw InvalidArgument("unknown score orientation '" + std::string(name) + "'");
}

SolverParams DetectorConfig::solver_params() const {
  SolverParams p;
  p.lambda = lambda;
  p.max_nonzeros = sparsity;
  p.max_iterations = max_iterations;
  p.tolerance = tolerance;
  p.exchange_candidates = exchange_candidates;
  return p;
}

void DetectorConfig::validate() const {
  solver_params().validate();
  window.validate();
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in [0, 1]");
  if (n_target_atoms < 1 || n_bg_atoms < 1) throw InvalidArgument("dictionary sizes must be >= 1");
  if (n_target_train < 1) throw InvalidArgument("n_target_train must be >= 1");
  if (!(bg_fraction > 0.0 && bg_fraction < 1.0)) throw InvalidArgument("bg_fraction must lie in (0, 1)");
  if (odl_epochs < 1 || odl_batch_size < 1) throw InvalidArgument("ODL epochs and batch size must be >= 1");
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
}

DetectorConfig dataset_preset(std::string_view name) {
  DetectorConfig c;
  if (name == "aviris-1") {
    c.window = {19, 9};
    c.gamma = 0.3;
  } else if (name == "aviris-2") {
    c.window = {17, 7};
    c.gamma = 0.2;
  } else if (name == "hydice") {
    c.window = {15, 5};
    c.gamma = 0.3;
  } else {
    throw InvalidArgument("unknown dataset preset '" + std::string(name) + "'");
  }
  return c;
}

}  // namespace wshr
