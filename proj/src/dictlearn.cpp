#include "wshr/dictlearn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "wshr/error.hpp"
#include "wshr/log.hpp"
#include "wshr/parallel.hpp"
#include "wshr/predetect.hpp"

namespace wshr {

namespace {

// Atoms whose accumulated usage A(j, j) is below this are left untouched by
// the block update.
constexpr double kMinUsage = 1e-12;
// Relative per-entry jitter applied to recycled samples during init.
constexpr double kInitJitter = 0.01;

std::vector<std::size_t> nonzero_columns(const Eigen::MatrixXd& samples) {
  std::vector<std::size_t> idx;
  for (Eigen::Index j = 0; j < samples.cols(); ++j)
    if (samples.col(j).squaredNorm() > 0.0) idx.push_back(static_cast<std::size_t>(j));
  return idx;
}

void check_samples(const Eigen::MatrixXd& samples) {
  if (samples.cols() == 0 || samples.rows() == 0) throw InvalidArgument("empty training set");
  if (!samples.allFinite()) throw NumericError("training samples contain non-finite values");
}

}  // namespace

void OdlParams::validate() const {
  if (n_atoms < 1) throw InvalidArgument("n_atoms must be >= 1");
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  solver.validate();
}

Dictionary init_dictionary(const Eigen::MatrixXd& samples, std::size_t n_atoms, std::uint64_t seed) {
  check_samples(samples);
  if (n_atoms < 1) throw InvalidArgument("n_atoms must be >= 1");
  std::vector<std::size_t> pool = nonzero_columns(samples);
  if (pool.empty()) throw NumericError("all training samples are zero");

  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double per_entry = kInitJitter / std::sqrt(static_cast<double>(samples.rows()));

  Eigen::MatrixXd atoms(samples.rows(), static_cast<Eigen::Index>(n_atoms));
  for (std::size_t j = 0; j < n_atoms; ++j) {
    Eigen::VectorXd atom = samples.col(static_cast<Eigen::Index>(pool[j % pool.size()]));
    atom /= atom.norm();
    if (j >= pool.size()) {
      for (Eigen::Index b = 0; b < atom.size(); ++b) atom[b] += per_entry * noise(rng);
      atom /= atom.norm();
    }
    atoms.col(static_cast<Eigen::Index>(j)) = atom;
  }
  return Dictionary(std::move(atoms));
}

OdlResult odl_learn_traced(const Eigen::MatrixXd& samples, const OdlParams& params) {
  params.validate();
  check_samples(samples);
  if (nonzero_columns(samples).empty()) throw NumericError("all training samples are zero");

  const Eigen::Index bands = samples.rows();
  const auto k = static_cast<Eigen::Index>(params.n_atoms);
  const std::size_t n = static_cast<std::size_t>(samples.cols());

  Eigen::MatrixXd d = init_dictionary(samples, params.n_atoms, params.seed).matrix();
  Eigen::MatrixXd a_stat = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd b_stat = Eigen::MatrixXd::Zero(bands, k);

  SolverParams solver = params.solver;
  solver.lambda = params.lambda;

  std::mt19937_64 rng(params.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  OdlResult result{Dictionary(static_cast<std::size_t>(bands)), {}};
  std::vector<SparseCode> codes;
  std::vector<double> sample_objective(n, 0.0);
  std::vector<double> sample_residual(n, 0.0);

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> usage(params.n_atoms, 0);
    double epoch_sum = 0.0;

    for (std::size_t start = 0; start < n; start += params.batch_size) {
      const std::size_t stop = std::min(n, start + params.batch_size);
      codes.assign(stop - start, SparseCode{});
      parallel_for(stop - start, params.threads, [&](std::size_t i) {
        const auto s = static_cast<Eigen::Index>(order[start + i]);
        const Spectrum x = samples.col(s);
        codes[i] = sparse_code(x, d, solver);
        const Eigen::VectorXd residual = x - d * codes[i].dense();
        double l1 = 0.0;
        for (double c : codes[i].coefficients) l1 += std::abs(c);
        sample_residual[order[start + i]] = residual.norm();
        sample_objective[order[start + i]] = 0.5 * residual.squaredNorm() + solver.lambda * l1;
      });

      for (std::size_t i = 0; i < codes.size(); ++i) {
        const auto& code = codes[i];
        const Eigen::VectorXd x = samples.col(static_cast<Eigen::Index>(order[start + i]));
        epoch_sum += sample_objective[order[start + i]];
        for (std::size_t p = 0; p < code.indices.size(); ++p) {
          const auto jp = static_cast<Eigen::Index>(code.indices[p]);
          ++usage[code.indices[p]];
          b_stat.col(jp) += code.coefficients[p] * x;
          for (std::size_t q = 0; q < code.indices.size(); ++q)
            a_stat(jp, static_cast<Eigen::Index>(code.indices[q])) += code.coefficients[p] * code.coefficients[q];
        }
      }

      // One block-coordinate pass over the atoms.
      for (Eigen::Index j = 0; j < k; ++j) {
        const double ajj = a_stat(j, j);
        if (ajj < kMinUsage) continue;
        Eigen::VectorXd u = d.col(j) + (b_stat.col(j) - d * a_stat.col(j)) / ajj;
        const double norm = u.norm();
        if (norm > 0.0 && std::isfinite(norm)) d.col(j) = u / norm;
      }
    }

    result.epoch_objectives.push_back(epoch_sum / static_cast<double>(n));

    // Replace unused atoms by the worst-reconstructed samples of this epoch.
    std::vector<std::size_t> dead;
    for (std::size_t j = 0; j < params.n_atoms; ++j)
      if (usage[j] == 0) dead.push_back(j);
    if (!dead.empty()) {
      std::vector<std::size_t> worst;
      for (std::size_t s = 0; s < n; ++s)
        if (sample_residual[s] > 0.0) worst.push_back(s);
      std::stable_sort(worst.begin(), worst.end(),
                       [&](std::size_t a, std::size_t b) { return sample_residual[a] > sample_residual[b]; });
      const std::size_t replace = std::min(dead.size(), worst.size());
      for (std::size_t r = 0; r < replace; ++r) {
        const auto j = static_cast<Eigen::Index>(dead[r]);
        const Eigen::VectorXd x = samples.col(static_cast<Eigen::Index>(worst[r]));
        d.col(j) = x / x.norm();
        a_stat.row(j).setZero();
        a_stat.col(j).setZero();
        b_stat.col(j).setZero();
      }
      logger().debug("ODL epoch {}: replaced {} unused atoms", epoch, replace);
    }
    logger().debug("ODL epoch {}: mean objective {:.6g}", epoch, result.epoch_objectives.back());
  }

  // Guard the unit-norm invariant against accumulated rounding.
  for (Eigen::Index j = 0; j < k; ++j) d.col(j) /= d.col(j).norm();
  result.dictionary = Dictionary(std::move(d));
  return result;
}

Dictionary odl_learn(const Eigen::MatrixXd& samples, const OdlParams& params) {
  return odl_learn_traced(samples, params).dictionary;
}

namespace {

OdlParams odl_params_for(const DetectorConfig& config, std::size_t atoms, std::uint64_t seed) {
  OdlParams p;
  p.n_atoms = atoms;
  p.lambda = config.lambda;
  p.epochs = config.odl_epochs;
  p.batch_size = config.odl_batch_size;
  p.seed = seed;
  p.solver = config.solver_params();
  p.threads = config.threads;
  return p;
}

}  // namespace

GlobalDictionaries learn_global_dictionaries(const HsiCube& cube, const Spectrum& signature,
                                             const DetectorConfig& config) {
  config.validate();
  const ScoreMap scores = cem_detect(cube, signature);
  const TrainingSets sets =
      select_training_sets(scores, cube, config.n_target_train, config.bg_fraction);
  logger().info("training sets: {} target, {} background samples", sets.target_indices.size(),
                sets.background_indices.size());
  Dictionary target = odl_learn(sets.target_samples, odl_params_for(config, config.n_target_atoms, config.seed));
  Dictionary background =
      odl_learn(sets.background_samples, odl_params_for(config, config.n_bg_atoms, config.seed + 1));
  return {std::move(target), std::move(background)};
}

Dictionary learn_target_dictionary(const HsiCube& cube, const Spectrum& signature,
                                   const DetectorConfig& config) {
  config.validate();
  const ScoreMap scores = cem_detect(cube, signature);
  const TrainingSets sets =
      select_training_sets(scores, cube, config.n_target_train, config.bg_fraction);
  return odl_learn(sets.target_samples, odl_params_for(config, config.n_target_atoms, config.seed));
}

}  // namespace wshr
