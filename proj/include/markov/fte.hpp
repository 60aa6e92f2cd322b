#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "markov/chain_core.hpp"

namespace markov {

// Solver defaults. Value iteration can contract arbitrarily slowly for weak
// discounting, hence the generous iteration budget with a progress check
// every kFteProgressInterval steps.
inline constexpr double kFteTol = 1e-12;
inline constexpr double kFteCap = 1e12;
inline constexpr std::size_t kFteMaxIters = 10'000'000;
inline constexpr std::size_t kFteProgressInterval = 10'000;

/// Data of a first-transition expectation: continue region C, per-state
/// reward r >= 0, and per-state discount rate alpha >= 0. The expectation
/// accumulates exp(-sum of alpha over visited states) * r along the path
/// until the first entry into the complement of C, collecting the reward at
/// the stopping state as well. The first step is undiscounted.
struct RewardSpec {
  std::vector<StateIndex> continue_region;  // C; sorted and deduplicated on use
  std::function<double(StateIndex)> reward;
  std::function<double(StateIndex)> discount_rate;

  // C = complement of target_set, alpha = 0, r = 1 on C. With this reward the
  // solution is exactly the mean number of steps to reach the target (the
  // all-ones reward would count one extra unit at the hit state).
  static RewardSpec hitting(std::size_t dimension,
                            const std::vector<StateIndex>& target_set);

  // C = all states, constant discount rate.
  static RewardSpec discounted(std::size_t dimension, double alpha0,
                               std::function<double(StateIndex)> reward);
};

struct FteSolution {
  enum class Method { kValueIteration, kLinearSolve, kRegenerative };

  std::vector<double> u;  // indexed by state; +infinity flags divergence
  Method method = Method::kValueIteration;
  std::size_t iterations = 0;
  double residual = 0.0;  // last sup-change (vi) or linear-system residual
};

/// Minimal non-negative solution of u = base + G u over compact indices, by
/// value iteration from zero. G entries must be non-negative with row sums
/// <= 1. Iterates are checked to be coordinatewise non-decreasing; any
/// coordinate exceeding cap is flagged +infinity and the flag propagates
/// through positive couplings. Throws ConvergenceError when the iteration
/// budget is exhausted (or provably will be) with no coordinate near cap.
struct MinimalSolveResult {
  std::vector<double> u;
  std::size_t iterations;
  double last_gap;
};
MinimalSolveResult minimal_affine_solution(
    const std::vector<std::vector<StochasticMatrix::Entry>>& g_rows,
    const std::vector<double>& base, double tol, double cap,
    std::size_t max_iters);

// Value iteration for the first-transition system with G(x,y) =
// exp(-alpha(x)) P(x,y); u is pinned to r on the complement of C.
FteSolution minimal_solution(const StochasticMatrix& m, const RewardSpec& spec,
                             double tol = kFteTol, double cap = kFteCap,
                             std::size_t max_iters = kFteMaxIters);

// Direct solve of (I - G_CC) u_C = r_C + G_{C,C^c} r_{C^c}. Requires the
// C-restricted kernel to be a strict contraction; a power estimate of its
// spectral radius at or above 1 - 1e-8 throws IllPosedError (the minimal
// solution may then be infinite or non-unique; use value iteration).
FteSolution linear_solve_fte(const StochasticMatrix& m, const RewardSpec& spec);

// Cycle decomposition of the same expectation over returns to x: the ratio of
// the expected reward collected before min(exit, return to x) over one minus
// the expected discounted survival of the return. Computed exactly by
// splitting x into an exit copy and an absorbing entry copy, reusing the
// value-iteration solver. Returns +infinity when the denominator vanishes
// with positive numerator; throws IndeterminateError on 0/0.
double regenerative_ratio(const StochasticMatrix& m, const RewardSpec& spec,
                          StateIndex x, double tol = kFteTol,
                          double cap = kFteCap,
                          std::size_t max_iters = kFteMaxIters);

// Mean number of steps to reach target_set from x (+infinity when the cap is
// exceeded, i.e. the target looks unreachable).
double mean_hitting_time(const StochasticMatrix& m,
                         const std::vector<StateIndex>& target_set, StateIndex x,
                         double tol = kFteTol, double cap = kFteCap,
                         std::size_t max_iters = kFteMaxIters);

// Expected infinite-horizon reward at constant discount rate alpha0 > 0.
double discounted_reward(const StochasticMatrix& m, double alpha0,
                         std::function<double(StateIndex)> reward, StateIndex x,
                         double tol = kFteTol, double cap = kFteCap,
                         std::size_t max_iters = kFteMaxIters);

// sum_x pi(x) w(x) over the support of pi.
double stationary_weighted_mean(const ProbDist& pi, const WeightFunction& w);

// Sup-norm residual of a finite solution plugged back into the
// first-transition system, over states of C whose value is finite.
double fte_residual(const StochasticMatrix& m, const RewardSpec& spec,
                    const std::vector<double>& u);

}  // namespace markov
