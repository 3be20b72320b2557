#include "wshr/sparse_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "wshr/error.hpp"

namespace wshr {

namespace {

/// Below this many candidate supports the solver enumerates them all.
constexpr std::size_t kExactSupportLimit = 1024;
/// Entering atoms considered per leaving pair.
constexpr std::size_t kPairCandidates = 6;

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Coefficients on an explicit support, in support order.
struct SupportState {
  std::vector<std::size_t> atoms;
  Eigen::VectorXd coef;
  double objective = 0.0;
};

class ActiveSetCoder {
 public:
  ActiveSetCoder(const Spectrum& x, const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                 const SolverParams& params)
      : atoms_(atoms),
        params_(params),
        corr0_(atoms.transpose() * x),
        diag_(atoms.colwise().squaredNorm().transpose()),
        half_xx_(0.5 * x.squaredNorm()),
        kkt_slack_(1e-9 * std::max(1.0, x.norm())),
        slot_(static_cast<std::size_t>(atoms.cols()), -1) {}

  SparseCode run(std::vector<double>* trace) {
    SupportState state;
    state.objective = half_xx_;
    if (trace) trace->push_back(state.objective);

    const std::size_t n = static_cast<std::size_t>(atoms_.cols());
    if (support_count(n, params_.max_nonzeros) <= kExactSupportLimit) {
      enumerate(state);
      if (trace && state.objective < half_xx_) trace->push_back(state.objective);
      return finish(state, n);
    }
    for (std::size_t iter = 0; iter < params_.max_iterations && half_xx_ > 0.0; ++iter) {
      const Eigen::VectorXd corr = residual_correlation(state);
      std::vector<bool> active(n, false);
      for (auto j : state.atoms) active[j] = true;

      std::size_t best = n;
      double best_abs = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (active[j]) continue;
        const double v = std::abs(corr[static_cast<Eigen::Index>(j)]);
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      // No inactive atom violates the optimality condition: the current point
      // is the global lasso optimum and satisfies the cap.
      if (best == n || best_abs <= params_.lambda + kkt_slack_) break;

      if (state.atoms.size() < params_.max_nonzeros) {
        SupportState next = state;
        next.atoms.push_back(best);
        next.coef.conservativeResize(static_cast<Eigen::Index>(next.atoms.size()));
        next.coef[next.coef.size() - 1] = 0.0;
        refine(next);
        if (!(next.objective < state.objective)) break;
        state = std::move(next);
        if (trace) trace->push_back(state.objective);
        continue;
      }

      SupportState swapped;
      if (!best_exchange(state, corr, active, swapped)) break;
      if (state.objective - swapped.objective < params_.tolerance) break;
      state = std::move(swapped);
      if (trace) trace->push_back(state.objective);
    }
    return finish(state, n);
  }

 private:
  /// Number of supports of size <= k, saturating at the exact-mode limit.
  static std::size_t support_count(std::size_t n, std::size_t k) {
    std::size_t total = 1;
    std::size_t term = 1;
    for (std::size_t s = 1; s <= std::min(n, k); ++s) {
      term = term * (n - s + 1) / s;
      total += term;
      if (total > kExactSupportLimit) return total;
    }
    return total;
  }

  /// Restricted lasso on every support of size <= k; keeps the best.
  void enumerate(SupportState& best) {
    const std::size_t n = static_cast<std::size_t>(atoms_.cols());
    const std::size_t k = std::min(n, params_.max_nonzeros);
    std::vector<std::size_t> pick;
    auto recurse = [&](auto&& self, std::size_t start) -> void {
      if (!pick.empty()) {
        SupportState trial;
        trial.atoms = pick;
        trial.coef = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pick.size()));
        refine(trial);
        if (trial.objective < best.objective) best = std::move(trial);
      }
      if (pick.size() == k) return;
      for (std::size_t j = start; j < n; ++j) {
        pick.push_back(j);
        self(self, j + 1);
        pick.pop_back();
      }
    };
    recurse(recurse, 0);
  }

  SparseCode finish(const SupportState& state, std::size_t n) const {
    SparseCode code;
    code.dictionary_atoms = n;
    std::vector<std::size_t> order(state.atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return state.atoms[a] < state.atoms[b]; });
    for (auto p : order) {
      const double c = state.coef[static_cast<Eigen::Index>(p)];
      if (c == 0.0) continue;
      code.indices.push_back(state.atoms[p]);
      code.coefficients.push_back(c);
    }
    return code;
  }

  const Eigen::VectorXd& gram_column(std::size_t j) {
    if (slot_[j] < 0) {
      columns_.emplace_back(atoms_.transpose() * atoms_.col(static_cast<Eigen::Index>(j)));
      slot_[j] = static_cast<int>(columns_.size() - 1);
    }
    return columns_[static_cast<std::size_t>(slot_[j])];
  }

  double gram(std::size_t a, std::size_t b) {
    if (a == b) return diag_[static_cast<Eigen::Index>(a)];
    if (slot_[a] >= 0) return columns_[static_cast<std::size_t>(slot_[a])][static_cast<Eigen::Index>(b)];
    if (slot_[b] >= 0) return columns_[static_cast<std::size_t>(slot_[b])][static_cast<Eigen::Index>(a)];
    return atoms_.col(static_cast<Eigen::Index>(a)).dot(atoms_.col(static_cast<Eigen::Index>(b)));
  }

  Eigen::VectorXd residual_correlation(const SupportState& s) {
    Eigen::VectorXd corr = corr0_;
    for (std::size_t p = 0; p < s.atoms.size(); ++p) {
      const double c = s.coef[static_cast<Eigen::Index>(p)];
      if (c != 0.0) corr -= c * gram_column(s.atoms[p]);
    }
    return corr;
  }

  double objective(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, const Eigen::VectorXd& a) const {
    return half_xx_ - b.dot(a) + 0.5 * a.dot(g * a) + params_.lambda * a.lpNorm<1>();
  }

  /// Coordinate descent, closed-form polish and zero pruning on s.atoms,
  /// starting from s.coef.
  void refine(SupportState& s) {
    const auto m = static_cast<Eigen::Index>(s.atoms.size());
    Eigen::MatrixXd g(m, m);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      b[i] = corr0_[static_cast<Eigen::Index>(s.atoms[static_cast<std::size_t>(i)])];
      for (Eigen::Index l = 0; l < m; ++l)
        g(i, l) = gram(s.atoms[static_cast<std::size_t>(i)], s.atoms[static_cast<std::size_t>(l)]);
    }

    Eigen::VectorXd& a = s.coef;
    double current = objective(g, b, a);
    for (std::size_t sweep = 0; sweep < params_.max_iterations; ++sweep) {
      for (Eigen::Index i = 0; i < m; ++i) {
        const double rho = b[i] - (g.row(i).dot(a) - g(i, i) * a[i]);
        a[i] = soft_threshold(rho, params_.lambda) / g(i, i);
      }
      const double next = objective(g, b, a);
      const double decrease = current - next;
      current = next;
      if (decrease < params_.tolerance * 1e-3) break;
    }

    polish(g, b, a, current);
    s.objective = current;

    // Drop atoms whose coefficient reached exactly zero.
    std::size_t kept = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (a[i] == 0.0) continue;
      s.atoms[kept] = s.atoms[static_cast<std::size_t>(i)];
      a[static_cast<Eigen::Index>(kept)] = a[i];
      ++kept;
    }
    s.atoms.resize(kept);
    a.conservativeResize(static_cast<Eigen::Index>(kept));
  }

  /// Replaces a by the exact minimizer for its sign pattern when that is
  /// consistent and no worse. Entries whose sign flips are zeroed and the
  /// solve repeated.
  void polish(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, Eigen::VectorXd& a, double& current) {
    Eigen::VectorXi signs(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) signs[i] = sign_of(a[i]);

    for (Eigen::Index attempt = 0; attempt <= a.size(); ++attempt) {
      std::vector<Eigen::Index> support;
      for (Eigen::Index i = 0; i < a.size(); ++i)
        if (signs[i] != 0) support.push_back(i);
      if (support.empty()) return;
      const auto p = static_cast<Eigen::Index>(support.size());
      Eigen::MatrixXd gp(p, p);
      Eigen::VectorXd rhs(p);
      for (Eigen::Index i = 0; i < p; ++i) {
        rhs[i] = b[support[static_cast<std::size_t>(i)]] - params_.lambda * signs[support[static_cast<std::size_t>(i)]];
        for (Eigen::Index l = 0; l < p; ++l)
          gp(i, l) = g(support[static_cast<std::size_t>(i)], support[static_cast<std::size_t>(l)]);
      }
      const Eigen::VectorXd z = gp.ldlt().solve(rhs);
      if (!z.allFinite()) return;

      bool consistent = true;
      for (Eigen::Index i = 0; i < p; ++i) {
        const auto idx = support[static_cast<std::size_t>(i)];
        if (sign_of(z[i]) != signs[idx]) {
          signs[idx] = 0;
          consistent = false;
        }
      }
      if (!consistent) continue;

      Eigen::VectorXd candidate = Eigen::VectorXd::Zero(a.size());
      for (Eigen::Index i = 0; i < p; ++i) candidate[support[static_cast<std::size_t>(i)]] = z[i];
      const double value = objective(g, b, candidate);
      if (value <= current) {
        a = candidate;
        current = value;
      }
      return;
    }
  }

  /// Best exchange of one or two active atoms for as many inactive ones.
  /// Entering atoms are drawn from the `exchange_candidates` inactive atoms
  /// with the largest single-coordinate gain once the leaving atoms are
  /// removed; pairs are tried only when no single exchange helps. Returns
  /// false when no exchange lowers the objective.
  bool best_exchange(const SupportState& state, const Eigen::VectorXd& corr,
                     const std::vector<bool>& active, SupportState& out) {
    const std::size_t n = active.size();
    const std::size_t k = state.atoms.size();
    bool found = false;
    double best = state.objective;

    std::vector<std::size_t> pool;
    pool.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
      if (!active[j]) pool.push_back(j);
    std::vector<double> gain(n, 0.0);

    auto try_support = [&](SupportState trial) {
      refine(trial);
      if (trial.objective < best) {
        best = trial.objective;
        out = std::move(trial);
        found = true;
      }
    };

    auto screened = [&](const Eigen::VectorXd& without) {
      for (auto j : pool) {
        const double t = soft_threshold(without[static_cast<Eigen::Index>(j)], params_.lambda);
        gain[j] = t * t / diag_[static_cast<Eigen::Index>(j)];
      }
      std::vector<std::size_t> candidates = pool;
      const auto by_gain = [&](std::size_t a, std::size_t b) {
        return gain[a] != gain[b] ? gain[a] > gain[b] : a < b;
      };
      const std::size_t keep = std::min(candidates.size(), params_.exchange_candidates);
      std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                        candidates.end(), by_gain);
      candidates.resize(keep);
      return candidates;
    };

    auto warm = [&](const Eigen::VectorXd& without, std::size_t j) {
      return soft_threshold(without[static_cast<Eigen::Index>(j)], params_.lambda) /
             diag_[static_cast<Eigen::Index>(j)];
    };

    for (std::size_t p = 0; p < k; ++p) {
      const Eigen::VectorXd without =
          corr + state.coef[static_cast<Eigen::Index>(p)] * gram_column(state.atoms[p]);
      for (auto j : screened(without)) {
        SupportState trial = state;
        trial.atoms[p] = j;
        trial.coef[static_cast<Eigen::Index>(p)] = warm(without, j);
        try_support(std::move(trial));
      }
    }

    if (found) return true;

    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        const Eigen::VectorXd without =
            corr + state.coef[static_cast<Eigen::Index>(p)] * gram_column(state.atoms[p]) +
            state.coef[static_cast<Eigen::Index>(q)] * gram_column(state.atoms[q]);
        auto candidates = screened(without);
        candidates.resize(std::min(candidates.size(), kPairCandidates));
        for (std::size_t u = 0; u < candidates.size(); ++u) {
          for (std::size_t v = u + 1; v < candidates.size(); ++v) {
            SupportState trial = state;
            trial.atoms[p] = candidates[u];
            trial.atoms[q] = candidates[v];
            trial.coef[static_cast<Eigen::Index>(p)] = warm(without, candidates[u]);
            trial.coef[static_cast<Eigen::Index>(q)] = 0.0;
            try_support(std::move(trial));
          }
        }
      }
    }
    return found;
  }

  Eigen::Ref<const Eigen::MatrixXd> atoms_;
  const SolverParams& params_;
  Eigen::VectorXd corr0_;
  Eigen::VectorXd diag_;
  double half_xx_;
  double kkt_slack_;
  std::vector<int> slot_;
  std::deque<Eigen::VectorXd> columns_;
};

}  // namespace

void SolverParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be >= 0");
  if (max_nonzeros < 1) throw InvalidArgument("max_nonzeros must be >= 1");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be > 0");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
}

Eigen::VectorXd SparseCode::dense() const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dictionary_atoms));
  for (std::size_t i = 0; i < indices.size(); ++i) a[static_cast<Eigen::Index>(indices[i])] = coefficients[i];
  return a;
}

SparseCode sparse_code(const Spectrum& x, const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                       const SolverParams& params, std::vector<double>* objective_trace) {
  params.validate();
  if (x.size() != atoms.rows()) {
    throw DimensionError("spectrum has " + std::to_string(x.size()) + " bands, dictionary has " +
                         std::to_string(atoms.rows()));
  }
  if (!x.allFinite()) throw NumericError("spectrum contains non-finite values");
  if (atoms.cols() == 0) {
    if (objective_trace) objective_trace->push_back(0.5 * x.squaredNorm());
    return SparseCode{{}, {}, 0};
  }
  ActiveSetCoder coder(x, atoms, params);
  return coder.run(objective_trace);
}

SparseCode sparse_code(const Spectrum& x, const Dictionary& dictionary, const SolverParams& params,
                       std::vector<double>* objective_trace) {
  return sparse_code(x, dictionary.matrix(), params, objective_trace);
}

namespace {

Eigen::VectorXd reconstruction(const Eigen::Ref<const Eigen::MatrixXd>& atoms, const SparseCode& code) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(atoms.rows());
  for (std::size_t i = 0; i < code.indices.size(); ++i)
    r += code.coefficients[i] * atoms.col(static_cast<Eigen::Index>(code.indices[i]));
  return r;
}

void check_code(const Spectrum& x, const Eigen::Ref<const Eigen::MatrixXd>& atoms, const SparseCode& code) {
  if (x.size() != atoms.rows()) throw DimensionError("spectrum and dictionary band counts differ");
  if (code.dictionary_atoms != static_cast<std::size_t>(atoms.cols()) ||
      code.indices.size() != code.coefficients.size()) {
    throw DimensionError("sparse code does not match dictionary");
  }
  for (auto j : code.indices)
    if (j >= code.dictionary_atoms) throw DimensionError("sparse code index out of range");
}

}  // namespace

double residual_norm(const Spectrum& x, const Eigen::Ref<const Eigen::MatrixXd>& atoms, const SparseCode& code) {
  check_code(x, atoms, code);
  return (x - reconstruction(atoms, code)).norm();
}

double residual_norm(const Spectrum& x, const Dictionary& dictionary, const SparseCode& code) {
  return residual_norm(x, dictionary.matrix(), code);
}

double sparse_objective(const Spectrum& x, const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                        const SparseCode& code, double lambda) {
  check_code(x, atoms, code);
  double l1 = 0.0;
  for (double c : code.coefficients) l1 += std::abs(c);
  return 0.5 * (x - reconstruction(atoms, code)).squaredNorm() + lambda * l1;
}

}  // namespace wshr
