#include "markov/fte.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include <Eigen/Dense>

namespace markov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<char> continue_mask(std::size_t dimension,
                                const std::vector<StateIndex>& continue_region) {
  std::vector<char> mask(dimension, 0);
  for (StateIndex x : continue_region) {
    if (x >= dimension) {
      throw DimensionError("continue region state " + std::to_string(x) +
                           " outside dimension " + std::to_string(dimension));
    }
    mask[x] = 1;
  }
  return mask;
}

double checked_reward(const RewardSpec& spec, StateIndex x) {
  double r = spec.reward(x);
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw PreconditionError("reward at state " + std::to_string(x) +
                            " must be finite and non-negative");
  }
  return r;
}

double checked_rate(const RewardSpec& spec, StateIndex x) {
  double a = spec.discount_rate(x);
  if (!(a >= 0.0)) {
    throw PreconditionError("discount rate at state " + std::to_string(x) +
                            " must be non-negative");
  }
  return a;
}

// Compact first-transition system: u_C = base + G_CC u_C, plus the pinned
// boundary values needed to reassemble a full-state solution.
struct CompactSystem {
  std::vector<std::vector<StochasticMatrix::Entry>> g_rows;
  std::vector<double> base;
  std::vector<StateIndex> c_states;            // compact index -> state
  std::vector<std::ptrdiff_t> compact_of;      // state -> compact index or -1
  std::vector<double> pinned;                  // full-length, r on C^c
};

CompactSystem build_system(const StochasticMatrix& m, const RewardSpec& spec) {
  const std::size_t n = m.dimension();
  const auto mask = continue_mask(n, spec.continue_region);

  CompactSystem sys;
  sys.compact_of.assign(n, -1);
  for (StateIndex x = 0; x < n; ++x) {
    if (mask[x]) {
      sys.compact_of[x] = static_cast<std::ptrdiff_t>(sys.c_states.size());
      sys.c_states.push_back(x);
    }
  }
  sys.pinned.assign(n, 0.0);
  for (StateIndex x = 0; x < n; ++x) {
    if (!mask[x]) sys.pinned[x] = checked_reward(spec, x);
  }

  sys.g_rows.resize(sys.c_states.size());
  sys.base.resize(sys.c_states.size());
  for (std::size_t i = 0; i < sys.c_states.size(); ++i) {
    StateIndex x = sys.c_states[i];
    double discount = std::exp(-checked_rate(spec, x));
    double b = checked_reward(spec, x);
    for (const auto& e : m.row(x)) {
      double g = discount * e.prob;
      if (g == 0.0) continue;
      if (mask[e.col]) {
        sys.g_rows[i].push_back({static_cast<StateIndex>(sys.compact_of[e.col]), g});
      } else {
        b += g * sys.pinned[e.col];
      }
    }
    sys.base[i] = b;
  }
  return sys;
}

FteSolution assemble(const CompactSystem& sys, std::vector<double> u_c,
                     FteSolution::Method method, std::size_t iterations,
                     double residual) {
  FteSolution out;
  out.u = sys.pinned;
  for (std::size_t i = 0; i < sys.c_states.size(); ++i) out.u[sys.c_states[i]] = u_c[i];
  out.method = method;
  out.iterations = iterations;
  out.residual = residual;
  return out;
}

// Power estimate of the spectral radius of a non-negative kernel:
// ||G^k e||_inf^(1/k) decreases to the radius from above, so a small value
// certifies contraction while values near 1 are flagged as ill-posed.
double spectral_radius_estimate(
    const std::vector<std::vector<StochasticMatrix::Entry>>& g_rows,
    std::size_t steps = 256) {
  const std::size_t k = g_rows.size();
  if (k == 0) return 0.0;
  std::vector<double> v(k, 1.0), next(k, 0.0);
  for (std::size_t s = 1; s <= steps; ++s) {
    double norm = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double acc = 0.0;
      for (const auto& e : g_rows[i]) acc += e.prob * v[e.col];
      next[i] = acc;
      norm = std::max(norm, acc);
    }
    v.swap(next);
    // stop before underflow destroys the root extraction
    if (norm < 1e-200 || s == steps) {
      return std::pow(norm, 1.0 / static_cast<double>(s));
    }
  }
  return 0.0;
}

}  // namespace

RewardSpec RewardSpec::hitting(std::size_t dimension,
                               const std::vector<StateIndex>& target_set) {
  std::vector<char> in_target(dimension, 0);
  for (StateIndex t : target_set) {
    if (t >= dimension) throw DimensionError("target state outside dimension");
    in_target[t] = 1;
  }
  RewardSpec spec;
  for (StateIndex x = 0; x < dimension; ++x) {
    if (!in_target[x]) spec.continue_region.push_back(x);
  }
  auto targets = std::make_shared<std::vector<char>>(std::move(in_target));
  spec.reward = [targets](StateIndex x) {
    return (x < targets->size() && (*targets)[x]) ? 0.0 : 1.0;
  };
  spec.discount_rate = [](StateIndex) { return 0.0; };
  return spec;
}

RewardSpec RewardSpec::discounted(std::size_t dimension, double alpha0,
                                  std::function<double(StateIndex)> reward) {
  RewardSpec spec;
  spec.continue_region.resize(dimension);
  for (StateIndex x = 0; x < dimension; ++x) spec.continue_region[x] = x;
  spec.reward = std::move(reward);
  spec.discount_rate = [alpha0](StateIndex) { return alpha0; };
  return spec;
}

MinimalSolveResult minimal_affine_solution(
    const std::vector<std::vector<StochasticMatrix::Entry>>& g_rows,
    const std::vector<double>& base, double tol, double cap,
    std::size_t max_iters) {
  if (tol <= 0.0) throw PreconditionError("tol must be positive");
  if (cap <= 0.0) throw PreconditionError("cap must be positive");
  const std::size_t k = g_rows.size();
  std::vector<double> u(k, 0.0), next(k, 0.0);

  double gap = kInf;
  double gap_at_checkpoint = kInf;
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    gap = 0.0;
    double max_finite = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double acc = base[i];
      for (const auto& e : g_rows[i]) acc += e.prob * u[e.col];
      if (acc > cap) acc = kInf;
      if (acc < u[i]) {
        throw ConsistencyError("value iteration decreased at coordinate " +
                               std::to_string(i));
      }
      next[i] = acc;
      bool both_inf = std::isinf(acc) && std::isinf(u[i]);
      double change = both_inf ? 0.0 : acc - u[i];
      gap = std::max(gap, change);
      if (std::isfinite(acc)) max_finite = std::max(max_finite, acc);
    }
    u.swap(next);
    if (gap < tol) return {std::move(u), iter, gap};

    if (iter % kFteProgressInterval == 0) {
      // Non-contracting increments mean linear growth; if no coordinate can
      // reach the cap within the remaining budget, the eventual outcome is a
      // non-convergence error, so report it now.
      if (std::isfinite(gap) && gap > 0.0 && gap >= 0.9999 * gap_at_checkpoint) {
        double remaining = static_cast<double>(max_iters - iter);
        if ((cap - max_finite) / gap > remaining) {
          throw ConvergenceError(
              "value iteration stalled after " + std::to_string(iter) +
              " iterations (sup-change " + std::to_string(gap) +
              " not contracting, cap unreachable within budget)",
              u, gap);
        }
      }
      gap_at_checkpoint = gap;
    }
  }
  throw ConvergenceError("value iteration did not converge within " +
                             std::to_string(max_iters) + " iterations",
                         u, gap);
}

FteSolution minimal_solution(const StochasticMatrix& m, const RewardSpec& spec,
                             double tol, double cap, std::size_t max_iters) {
  CompactSystem sys = build_system(m, spec);
  MinimalSolveResult res =
      minimal_affine_solution(sys.g_rows, sys.base, tol, cap, max_iters);
  return assemble(sys, std::move(res.u), FteSolution::Method::kValueIteration,
                  res.iterations, res.last_gap);
}

FteSolution linear_solve_fte(const StochasticMatrix& m, const RewardSpec& spec) {
  CompactSystem sys = build_system(m, spec);
  const std::size_t k = sys.c_states.size();
  if (k == 0) return assemble(sys, {}, FteSolution::Method::kLinearSolve, 0, 0.0);

  double radius = spectral_radius_estimate(sys.g_rows);
  if (radius >= 1.0 - 1e-8) {
    throw IllPosedError(
        "spectral radius estimate " + std::to_string(radius) +
        " of the C-restricted kernel is too close to 1; the minimal solution "
        "may be infinite or non-unique (use value iteration)");
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k),
                                                static_cast<Eigen::Index>(k));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    rhs[static_cast<Eigen::Index>(i)] = sys.base[i];
    for (const auto& e : sys.g_rows[i]) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) -= e.prob;
    }
  }
  Eigen::VectorXd sol = a.partialPivLu().solve(rhs);
  double residual = (a * sol - rhs).cwiseAbs().maxCoeff();

  std::vector<double> u_c(k);
  for (std::size_t i = 0; i < k; ++i) {
    double v = sol[static_cast<Eigen::Index>(i)];
    if (v < 0.0) {
      if (v < -1e-9 * (1.0 + sol.cwiseAbs().maxCoeff())) {
        throw ConsistencyError("linear solve produced a negative value " +
                               std::to_string(v));
      }
      v = 0.0;
    }
    u_c[i] = v;
  }
  return assemble(sys, std::move(u_c), FteSolution::Method::kLinearSolve, 1,
                  residual);
}

namespace {

// The chain with x split into an exit copy (x itself, where paths start) and
// an absorbing entry copy appended as state N; every transition into x is
// redirected to the entry copy.
StochasticMatrix split_return_state(const StochasticMatrix& m, StateIndex x) {
  const std::size_t n = m.dimension();
  std::vector<StochasticMatrix::Row> rows(n + 1);
  for (StateIndex y = 0; y < n; ++y) {
    for (const auto& e : m.row(y)) {
      rows[y].push_back({e.col == x ? static_cast<StateIndex>(n) : e.col, e.prob});
    }
  }
  rows[n].push_back({static_cast<StateIndex>(n), 1.0});
  return StochasticMatrix(n + 1, std::move(rows));
}

}  // namespace

double regenerative_ratio(const StochasticMatrix& m, const RewardSpec& spec,
                          StateIndex x, double tol, double cap,
                          std::size_t max_iters) {
  const std::size_t n = m.dimension();
  const auto mask = continue_mask(n, spec.continue_region);
  if (x >= n || !mask[x]) {
    throw PreconditionError("regenerative state " + std::to_string(x) +
                            " must lie in the continue region");
  }
  StochasticMatrix split = split_return_state(m, x);

  // Numerator: reward collected before min(exit, return); the entry copy
  // carries zero reward so the return visit itself contributes nothing.
  RewardSpec num_spec;
  num_spec.continue_region = spec.continue_region;
  num_spec.reward = [&spec, n](StateIndex y) {
    return y == n ? 0.0 : spec.reward(y);
  };
  num_spec.discount_rate = [&spec, n](StateIndex y) {
    return y == n ? 0.0 : spec.discount_rate(y);
  };
  FteSolution num_sol = minimal_solution(split, num_spec, tol, cap, max_iters);
  double numerator = num_sol.u[x];

  // Denominator 1 - E[discount * 1{return before exit}], computed directly as
  // the minimal solution of w = (1 - exp(-alpha(y)) (1 - P(y, C^c))) + G w so
  // that a vanishing denominator comes out as an exact zero instead of a
  // cancellation 1 - (1 - epsilon).
  CompactSystem sys = build_system(split, num_spec);
  std::vector<double> base_w(sys.c_states.size());
  for (std::size_t i = 0; i < sys.c_states.size(); ++i) {
    StateIndex y = sys.c_states[i];
    double exit_mass = 0.0;
    for (const auto& e : split.row(y)) {
      if (e.col != n && !mask[e.col]) exit_mass += e.prob;
    }
    double discount = std::exp(-checked_rate(num_spec, y));
    double b = 1.0 - discount * (1.0 - exit_mass);
    base_w[i] = std::max(b, 0.0);
  }
  MinimalSolveResult w_sol =
      minimal_affine_solution(sys.g_rows, base_w, tol, cap, max_iters);
  double denominator = w_sol.u[static_cast<std::size_t>(sys.compact_of[x])];

  if (denominator <= 1e-300) {
    if (numerator > 0.0) return kInf;
    throw IndeterminateError(
        "regenerative numerator and denominator both vanish at state " +
        std::to_string(x));
  }
  return numerator / denominator;
}

double mean_hitting_time(const StochasticMatrix& m,
                         const std::vector<StateIndex>& target_set, StateIndex x,
                         double tol, double cap, std::size_t max_iters) {
  RewardSpec spec = RewardSpec::hitting(m.dimension(), target_set);
  FteSolution sol = minimal_solution(m, spec, tol, cap, max_iters);
  return sol.u[x];
}

double discounted_reward(const StochasticMatrix& m, double alpha0,
                         std::function<double(StateIndex)> reward, StateIndex x,
                         double tol, double cap, std::size_t max_iters) {
  if (!(alpha0 > 0.0)) throw PreconditionError("discount rate must be positive");
  RewardSpec spec = RewardSpec::discounted(m.dimension(), alpha0, std::move(reward));
  FteSolution sol = minimal_solution(m, spec, tol, cap, max_iters);
  return sol.u[x];
}

double stationary_weighted_mean(const ProbDist& pi, const WeightFunction& w) {
  double total = 0.0;
  for (const auto& [x, mass] : pi.support()) total += mass * w(x);
  return total;
}

double fte_residual(const StochasticMatrix& m, const RewardSpec& spec,
                    const std::vector<double>& u) {
  if (u.size() != m.dimension()) throw DimensionError("solution length mismatch");
  CompactSystem sys = build_system(m, spec);
  double residual = 0.0;
  for (std::size_t i = 0; i < sys.c_states.size(); ++i) {
    StateIndex x = sys.c_states[i];
    if (!std::isfinite(u[x])) continue;
    double acc = sys.base[i];
    bool finite = true;
    for (const auto& e : sys.g_rows[i]) {
      double v = u[sys.c_states[e.col]];
      if (!std::isfinite(v)) {
        finite = false;
        break;
      }
      acc += e.prob * v;
    }
    if (finite) residual = std::max(residual, std::abs(acc - u[x]));
  }
  return residual;
}

}  // namespace markov
