#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "markov/chain_core.hpp"

namespace markov {

inline constexpr double kStationarityResidualTol = 1e-8;
inline constexpr double kMonotoneSlack = 1e-12;

/// Decomposition of the all-horizons marginal-distance bound into its three
/// triangle-inequality terms. `total` is always the exact sum of the three.
struct UniformBoundReport {
  std::size_t horizon = 0;       // the t at which the chain was cut
  double term_transient = 0.0;   // 2 * max_{0<=j<=t} TV(A^j(x,.), B^j(x,.))
  double term_stationary = 0.0;  // 2 * TV(pi_A, pi_B)
  double term_mixing = 0.0;      // 2 * TV(B^t(x,.), pi_B)
  double total = 0.0;
};

struct SupTvResult {
  double max_tv = 0.0;
  std::size_t argmax = 0;        // smallest maximizing step
  std::vector<double> profile;   // TV at m = 0, ..., horizon
};

// Maximum TV distance between the two chains' marginals from x over
// m = 0..horizon, with the full profile. Chains must share a dimension.
SupTvResult sup_tv_horizon(const StochasticMatrix& a, const StochasticMatrix& b,
                           StateIndex x, std::size_t horizon);

// Upper bound on sup over ALL m >= 0 of TV(A^m(x,.), B_ref^m(x,.)), valid
// whenever pi_a and pi_b are stationary for their chains (residuals checked
// against residual_tol). No aperiodicity is needed: the bound uses only
// stationarity and the fact that the one-ball of test functions is preserved
// by every transition kernel, which makes the distance to the stationary law
// non-increasing in the step count.
UniformBoundReport certified_uniform_bound(
    const StochasticMatrix& a, const StochasticMatrix& b_ref,
    const ProbDist& pi_a, const ProbDist& pi_b, StateIndex x,
    std::size_t horizon, double residual_tol = kStationarityResidualTol);

// The sequence TV(M^m(x,.), pi) for m = 0..horizon. Postcondition asserted:
// non-increasing within kMonotoneSlack; a violation throws ConsistencyError
// since it signals a stationarity or arithmetic bug.
std::vector<double> monotone_tv_profile(const StochasticMatrix& m,
                                        const ProbDist& pi, StateIndex x,
                                        std::size_t horizon);

// Bound on sup over m of the w-weighted marginal distance:
//   b * certified total
//   + 2 * max(tail_a, tail_b) / min(pi_a(x), pi_b(x)),
// where tail = sum_y w(y) pi(y) 1{w(y) > b}. Requires pi_a(x) > 0,
// pi_b(x) > 0 and b >= 1.
double weighted_uniform_bound(const StochasticMatrix& a,
                              const StochasticMatrix& b_ref,
                              const ProbDist& pi_a, const ProbDist& pi_b,
                              StateIndex x, std::size_t horizon,
                              const WeightFunction& w, double b,
                              double residual_tol = kStationarityResidualTol);

struct DiagonalProbeRow {
  std::size_t n;
  std::size_t m;
  double tv;
};

// TV(P_n^{m_n}(x,.), target) along a schedule m_n. The schedule must be
// non-decreasing and non-constant over the supplied family (it stands in for
// a sequence growing without bound); values are reported as-is, no
// convergence claim is made.
std::vector<DiagonalProbeRow> diagonal_probe(
    const std::vector<std::pair<std::size_t, StochasticMatrix>>& family,
    const std::vector<std::size_t>& schedule, StateIndex x,
    const ProbDist& target);

}  // namespace markov
