#pragma once

#include <cstddef>

#include "markov/chain_core.hpp"

namespace markov {

class RateMatrix;  // jump.hpp

/// Stationary distribution by Grassmann-Taksar-Heyman elimination.
///
/// Subtraction-free, so it stays accurate on nearly-uncoupled truncations.
/// Requires a single closed communicating class whose states are reachable
/// through lower-indexed states during the back-to-front elimination (true
/// for irreducible matrices and for redirect-augmented truncations); a
/// vanishing pivot throws StructureError. Transient states get mass 0.
ProbDist gth(const StochasticMatrix& m);

struct PowerIterationResult {
  ProbDist dist;
  std::size_t steps;  // number of transition applications performed
};

/// Iterates marginals from delta_{x0} until the TV distance between
/// successive iterates (plain mode) or successive running Cesaro averages
/// (cesaro mode) drops below tol. Throws ConvergenceError with the last
/// iterate after max_steps.
///
/// Cesaro successive differences shrink like 1/m^2 while the averages
/// approach the stationary law only like 1/m, so in cesaro mode the achieved
/// accuracy is on the order of sqrt(tol), not tol.
PowerIterationResult power_iteration(const StochasticMatrix& m, StateIndex x0,
                                     double tol, std::size_t max_steps,
                                     bool cesaro = false);

/// Stationary distribution of a conservative generator: applies gth to the
/// uniformized matrix P = I + Q/Lambda with Lambda = max exit rate. A zero
/// Lambda is degenerate unless the chain has a single state.
ProbDist ctmc_stationary(const RateMatrix& q);

}  // namespace markov
