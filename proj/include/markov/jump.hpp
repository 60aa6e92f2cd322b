#pragma once

#include <cstddef>
#include <vector>

#include "markov/chain_core.hpp"
#include "markov/fte.hpp"
#include "markov/interchange.hpp"

namespace markov {

/// Conservative generator of a finite Markov jump process: off-diagonal
/// entries are rates >= 0 and every row sums to zero. Rows store the diagonal
/// explicitly.
class RateMatrix {
 public:
  struct Entry {
    StateIndex col;
    double rate;
  };
  using Row = std::vector<Entry>;

  RateMatrix(std::size_t n, std::vector<Row> rows);
  static RateMatrix from_dense(const std::vector<std::vector<double>>& rows);

  std::size_t dimension() const { return n_; }
  const Row& row(StateIndex x) const;
  double at(StateIndex row, StateIndex col) const;
  double exit_rate(StateIndex x) const;  // -Q(x,x), clamped at 0

 private:
  std::size_t n_;
  std::vector<Row> rows_;
};

struct RateViolation {
  StateIndex row;
  double row_sum;             // should be 0
  double min_off_diagonal;    // should be >= 0
};

struct RateValidationReport {
  std::vector<RateViolation> rows;
  bool ok() const { return rows.empty(); }
};

// Checks off-diagonal non-negativity and zero row sums within tol.
RateValidationReport validate_rate_matrix(const RateMatrix& q, double tol);

/// Embedded discrete-time chain of a generator: holding rates
/// lambda(x) = -Q(x,x) and the jump matrix R with zero diagonal. States with
/// lambda(x) = 0 are kept stochastic with R(x,x) = 1.
struct JumpChain {
  std::vector<double> holding_rates;
  StochasticMatrix jump_matrix;
};

JumpChain embedded_chain(const RateMatrix& q);

// Uniformized transition matrix P = I + Q/Lambda; Lambda must dominate every
// exit rate.
StochasticMatrix uniformized(const RateMatrix& q, double lambda);

// Transient law exp(Qt) delta_x by uniformization: a Poisson mixture of
// uniformized powers, truncated once the Poisson tail bound drops below eps,
// then renormalized. A frozen chain (all rates zero) returns delta_x.
ProbDist transient(const RateMatrix& q, StateIndex x, double t, double eps);

// Maximum absolute entry of pi Q, the continuous-time stationarity residual.
double ctmc_stationarity_residual(const ProbDist& pi, const RateMatrix& q);

/// Continuous-time uniform bound: unit-time skeleton matrices are built row
/// by row with `transient`, then the discrete certified bound applies; the
/// distance to the stationary law is non-increasing in real time, so the
/// skeleton total bounds the transient-law distance at all real t >= 0 up to
/// the reported truncation slack.
struct CtmcUniformBoundReport {
  UniformBoundReport skeleton;
  double truncation_slack = 0.0;  // 4 * eps * dimension
  double total() const { return skeleton.total + truncation_slack; }
};

CtmcUniformBoundReport ctmc_certified_uniform_bound(
    const RateMatrix& q_a, const RateMatrix& q_ref, const ProbDist& pi_a,
    const ProbDist& pi_ref, StateIndex x, std::size_t skeleton_horizon,
    double eps, double skeleton_step = 1.0);

// Expected integral of exp(-integral of alpha) * r(X(s)) until the first exit
// from C, reduced to a discrete first-transition system on the embedded
// chain: reward r(y)/(lambda(y)+alpha(y)) and substochastic step
// (lambda(y)/(lambda(y)+alpha(y))) R(y, .). Exit states contribute nothing.
// A state with lambda + alpha = 0 inside C yields +infinity when r > 0 there
// (stuck forever collecting reward) and 0 when r = 0.
double ctmc_fte(const RateMatrix& q, const RewardSpec& spec, StateIndex x,
                double tol = kFteTol, double cap = kFteCap,
                std::size_t max_iters = kFteMaxIters);

}  // namespace markov
