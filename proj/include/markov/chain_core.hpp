#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "markov/errors.hpp"

namespace markov {

using StateIndex = std::size_t;

// Tolerances shared across the library.
inline constexpr double kMassTol = 1e-12;       // ProbDist normalization slack
inline constexpr double kRenormDriftTol = 1e-10;  // max drift absorbed by propagate

/// Finitely supported probability vector over non-negative integer states.
/// Entries are stored sorted by state, zero masses dropped, masses >= 0 and
/// summing to 1 within kMassTol.
class ProbDist {
 public:
  using Entry = std::pair<StateIndex, double>;

  static ProbDist delta(StateIndex x);

  // Sorts, merges duplicate states, drops zeros, validates the invariants.
  static ProbDist from_pairs(std::vector<Entry> pairs);

  // Dense vector of masses indexed by state; `drift_tol` bounds the allowed
  // deviation of the total mass from 1 before renormalization.
  static ProbDist from_dense(const std::vector<double>& masses,
                             double drift_tol = kMassTol);

  const std::vector<Entry>& support() const { return support_; }
  double mass_at(StateIndex x) const;
  StateIndex max_state() const;  // throws on empty (cannot happen post-construction)
  std::vector<double> to_dense(std::size_t dimension) const;

  friend bool operator==(const ProbDist& a, const ProbDist& b) {
    return a.support_ == b.support_;
  }

 private:
  explicit ProbDist(std::vector<Entry> support) : support_(std::move(support)) {}
  std::vector<Entry> support_;
};

/// Sparse row-stochastic matrix over {0, ..., N-1}. Construction checks only
/// structural validity (column bounds, sorted rows); use validate_stochastic
/// to check row sums.
class StochasticMatrix {
 public:
  struct Entry {
    StateIndex col;
    double prob;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  using Row = std::vector<Entry>;

  // Rows are sorted by column and duplicate columns merged; entries equal to
  // zero are kept out. Throws DimensionError if a column index is >= n.
  StochasticMatrix(std::size_t n, std::vector<Row> rows);

  static StochasticMatrix from_dense(const std::vector<std::vector<double>>& rows);
  static StochasticMatrix identity(std::size_t n);

  std::size_t dimension() const { return n_; }
  const Row& row(StateIndex x) const;
  double at(StateIndex row, StateIndex col) const;

 private:
  std::size_t n_;
  std::vector<Row> rows_;
};

/// Row oracle for a countable-state kernel: row(x) is the finitely supported
/// transition row out of x. Must be deterministic (same x, same row).
class CountableKernel {
 public:
  using RowFn = std::function<ProbDist(StateIndex)>;
  using SupportBoundFn = std::function<StateIndex(StateIndex)>;

  explicit CountableKernel(RowFn row_fn,
                           std::optional<SupportBoundFn> support_bound = std::nullopt)
      : row_fn_(std::move(row_fn)), support_bound_(std::move(support_bound)) {}

  ProbDist row(StateIndex x) const { return row_fn_(x); }

  // Largest column reachable in one step from x, when known.
  std::optional<StateIndex> support_bound(StateIndex x) const {
    if (!support_bound_) return std::nullopt;
    return (*support_bound_)(x);
  }

 private:
  RowFn row_fn_;
  std::optional<SupportBoundFn> support_bound_;
};

/// Weight function w with w(x) >= 1 for all x, so the weighted total
/// variation dominates the unweighted one. Evaluation throws
/// PreconditionError if the wrapped function dips below 1.
class WeightFunction {
 public:
  explicit WeightFunction(std::function<double(StateIndex)> w)
      : w_(std::move(w)) {}

  static WeightFunction ones() {
    return WeightFunction([](StateIndex) { return 1.0; });
  }

  double operator()(StateIndex x) const;

 private:
  std::function<double(StateIndex)> w_;
};

struct RowViolation {
  StateIndex row;
  double sum_deviation;  // row sum minus 1
  double min_entry;      // most negative entry seen (0 if none)
};

struct ValidationReport {
  std::vector<RowViolation> rows;
  bool ok() const { return rows.empty(); }
};

// Reports every row whose sum deviates from 1 by more than tol or that has an
// entry below -tol. Does not throw.
ValidationReport validate_stochastic(const StochasticMatrix& m, double tol);

// Repair path: entries in (-tol, 0) are clamped to 0 and the row renormalized.
// Entries <= -tol are left for validate_stochastic to report.
StochasticMatrix clamp_and_renormalize(const StochasticMatrix& m, double tol);

// One application of the transition operator: d -> dM. The product's total
// mass must stay within kRenormDriftTol of 1 (then renormalized); larger
// drift throws ConsistencyError since it means M is not stochastic.
ProbDist propagate(const ProbDist& d, const StochasticMatrix& m);

// m-step marginal of the chain started at x: delta_x M^steps.
ProbDist marginal(const StochasticMatrix& m, StateIndex x, std::size_t steps);

// Total variation distance sum_y |a(y) - b(y)|, in [0, 2].
double tv_distance(const ProbDist& a, const ProbDist& b);

// Weighted total variation sum_y w(y) |a(y) - b(y)|; dominates tv_distance
// because w >= 1.
double weighted_tv_distance(const ProbDist& a, const ProbDist& b,
                            const WeightFunction& w);

// L1 residual of the stationarity equation, sum_y |(pi M)(y) - pi(y)|,
// computed without renormalization.
double stationarity_residual(const ProbDist& pi, const StochasticMatrix& m);

}  // namespace markov
