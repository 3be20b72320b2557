#pragma once

#include <cstddef>
#include <vector>

#include "wshr/cube.hpp"

namespace wshr {

struct SolverParams {
  double lambda = 0.1;              ///< L1 weight
  std::size_t max_nonzeros = 5;     ///< support cap k
  std::size_t max_iterations = 200; ///< outer iterations (admissions + exchanges)
  double tolerance = 1e-7;          ///< minimum objective decrease to keep iterating
  /// When the cap binds, each active atom is tried against this many inactive
  /// atoms, ranked by their single-coordinate gain. Dictionaries with fewer
  /// inactive atoms are searched exhaustively.
  std::size_t exchange_candidates = 16;

  void validate() const;
};

/// Sparse coefficient vector stored by support. Indices strictly increase.
struct SparseCode {
  std::vector<std::size_t> indices;
  std::vector<double> coefficients;
  std::size_t dictionary_atoms = 0;

  std::size_t nonzeros() const { return indices.size(); }
  Eigen::VectorXd dense() const;
};

/// Minimizes 0.5 * ||x - D a||^2 + lambda * ||a||_1 subject to
/// ||a||_0 <= max_nonzeros.
///
/// Small problems (at most 1024 supports of size <= k) are solved exactly by
/// running the restricted lasso on every support. Larger ones are solved
/// approximately: atoms enter one at a time by largest absolute residual correlation. After
/// each admission the active coefficients are refined by soft-thresholded
/// coordinate descent and then polished with the closed-form solution for the
/// current sign pattern. If no inactive atom violates the L1 optimality
/// condition the result is the unconstrained lasso optimum. Otherwise, once
/// the cap is reached, one- and two-atom exchanges are accepted while they
/// lower the objective.
///
/// If `objective_trace` is given it receives the objective after every
/// accepted step, starting with the zero code; it is non-increasing.
SparseCode sparse_code(const Spectrum& x, const Dictionary& dictionary, const SolverParams& params,
                       std::vector<double>* objective_trace = nullptr);

/// Same as above on a raw bands x atoms matrix whose columns are assumed unit
/// norm. Used on per-pixel dictionaries to skip re-validation.
SparseCode sparse_code(const Spectrum& x, const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                       const SolverParams& params, std::vector<double>* objective_trace = nullptr);

/// ||x - D a||_2.
double residual_norm(const Spectrum& x, const Dictionary& dictionary, const SparseCode& code);
double residual_norm(const Spectrum& x, const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                     const SparseCode& code);

/// 0.5 * ||x - D a||^2 + lambda * ||a||_1.
double sparse_objective(const Spectrum& x, const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                        const SparseCode& code, double lambda);

}  // namespace wshr
