#include "markov/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "markov/jump.hpp"

namespace markov {

namespace {

constexpr double kMinPivot = 1e-300;

}  // namespace

ProbDist gth(const StochasticMatrix& m) {
  const std::size_t n = m.dimension();
  // Dense working copy; the elimination only ever adds nonnegative products,
  // so entries stay nonnegative throughout.
  std::vector<double> a(n * n, 0.0);
  for (StateIndex x = 0; x < n; ++x) {
    for (const auto& e : m.row(x)) a[x * n + e.col] += e.prob;
  }

  std::vector<StateIndex> row_nz;  // columns j < k with a[k][j] != 0
  for (std::size_t k = n - 1; k >= 1; --k) {
    const double* row_k = &a[k * n];
    double pivot = 0.0;
    row_nz.clear();
    for (StateIndex j = 0; j < k; ++j) {
      if (row_k[j] != 0.0) {
        pivot += row_k[j];
        row_nz.push_back(j);
      }
    }
    if (pivot <= kMinPivot) {
      throw StructureError(
          "GTH pivot vanished while eliminating state " + std::to_string(k) +
          ": no single closed communicating class reachable through "
          "lower-indexed states");
    }
    for (StateIndex i = 0; i < k; ++i) {
      double& aik = a[i * n + k];
      if (aik == 0.0) continue;
      aik /= pivot;
      double* row_i = &a[i * n];
      for (StateIndex j : row_nz) row_i[j] += aik * row_k[j];
    }
  }

  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  double total = 1.0;
  for (StateIndex k = 1; k < n; ++k) {
    double v = 0.0;
    for (StateIndex i = 0; i < k; ++i) v += pi[i] * a[i * n + k];
    pi[k] = v;
    total += v;
  }
  for (double& v : pi) v /= total;
  return ProbDist::from_dense(pi, kMassTol);
}

PowerIterationResult power_iteration(const StochasticMatrix& m, StateIndex x0,
                                     double tol, std::size_t max_steps,
                                     bool cesaro) {
  if (tol <= 0.0) throw PreconditionError("tol must be positive");
  ProbDist current = marginal(m, x0, 0);
  ProbDist iterate = current;  // Cesaro average in cesaro mode
  std::size_t cesaro_count = 1;
  double gap = 2.0;

  for (std::size_t step = 1; step <= max_steps; ++step) {
    current = propagate(current, m);
    ProbDist next = current;
    if (cesaro) {
      // next average = (count * avg + current) / (count + 1)
      std::size_t dim = std::max(current.max_state(), iterate.max_state()) + 1;
      std::vector<double> acc = iterate.to_dense(dim);
      for (double& v : acc) v *= static_cast<double>(cesaro_count);
      for (const auto& [s, mass] : current.support()) acc[s] += mass;
      for (double& v : acc) v /= static_cast<double>(cesaro_count + 1);
      next = ProbDist::from_dense(acc, kRenormDriftTol);
      ++cesaro_count;
    }
    gap = tv_distance(next, iterate);
    iterate = std::move(next);
    if (gap < tol) return {iterate, step};
  }
  throw ConvergenceError(
      "power iteration did not converge within " + std::to_string(max_steps) +
      " steps (mode " + (cesaro ? "cesaro" : "plain") + ")",
      iterate.to_dense(m.dimension()), gap);
}

ProbDist ctmc_stationary(const RateMatrix& q) {
  const auto report = validate_rate_matrix(q, 1e-9);
  if (!report.ok()) {
    throw PreconditionError("rate matrix fails validation; see validate_rate_matrix");
  }
  double lambda_max = 0.0;
  for (StateIndex x = 0; x < q.dimension(); ++x) {
    lambda_max = std::max(lambda_max, q.exit_rate(x));
  }
  if (lambda_max == 0.0) {
    if (q.dimension() == 1) return ProbDist::delta(0);
    throw DegenerateError("all states absorbing; stationary law not unique");
  }
  return gth(uniformized(q, lambda_max));
}

}  // namespace markov
