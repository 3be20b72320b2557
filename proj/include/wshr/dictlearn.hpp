#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "wshr/config.hpp"
#include "wshr/cube.hpp"

namespace wshr {

struct OdlParams {
  std::size_t n_atoms = 10;
  double lambda = 0.1;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  /// Sparse-coding limits used for every sample.
  SolverParams solver{};
  std::size_t threads = 1;

  void validate() const;
};

struct OdlResult {
  Dictionary dictionary;
  /// Mean of 0.5 ||x - D a||^2 + lambda ||a||_1 over each epoch, measured
  /// when each sample is coded (before that batch's dictionary update).
  std::vector<double> epoch_objectives;
};

/// Seeded initial atoms (bands x n_atoms, unit norm). Draws distinct nonzero
/// training samples without replacement; when more atoms than samples are
/// requested, the sample order is cycled and the repeats are jittered.
Dictionary init_dictionary(const Eigen::MatrixXd& samples, std::size_t n_atoms, std::uint64_t seed);

/// Online dictionary learning over the columns of `samples`.
///
/// Each mini-batch is sparse-coded against the current dictionary, the codes
/// are folded into the sufficient statistics A = sum a a' and B = sum x a',
/// and every atom is updated once by block coordinate descent and projected
/// back to unit norm. At the end of each epoch atoms that no sample used are
/// replaced by the worst-reconstructed samples of that epoch.
OdlResult odl_learn_traced(const Eigen::MatrixXd& samples, const OdlParams& params);
Dictionary odl_learn(const Eigen::MatrixXd& samples, const OdlParams& params);

struct GlobalDictionaries {
  Dictionary target;
  Dictionary background;
};

/// CEM pre-detection, training-set selection, then ODL on both sets.
GlobalDictionaries learn_global_dictionaries(const HsiCube& cube, const Spectrum& signature,
                                             const DetectorConfig& config);

/// Target dictionary only (used by the STD baseline).
Dictionary learn_target_dictionary(const HsiCube& cube, const Spectrum& signature,
                                   const DetectorConfig& config);

}  // namespace wshr
