#include "markov/interchange.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace markov {

namespace {

void require_same_dimension(const StochasticMatrix& a, const StochasticMatrix& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionError("chains have dimensions " + std::to_string(a.dimension()) +
                         " and " + std::to_string(b.dimension()));
  }
}

void require_stationary(const ProbDist& pi, const StochasticMatrix& m,
                        double residual_tol, const char* which) {
  double r = stationarity_residual(pi, m);
  if (r >= residual_tol) {
    throw PreconditionError(std::string("distribution is not stationary for ") +
                            which + ": residual " + std::to_string(r));
  }
}

}  // namespace

SupTvResult sup_tv_horizon(const StochasticMatrix& a, const StochasticMatrix& b,
                           StateIndex x, std::size_t horizon) {
  require_same_dimension(a, b);
  SupTvResult out;
  out.profile.reserve(horizon + 1);
  ProbDist da = ProbDist::delta(x);
  ProbDist db = da;
  for (std::size_t m = 0; m <= horizon; ++m) {
    if (m > 0) {
      da = propagate(da, a);
      db = propagate(db, b);
    }
    double tv = tv_distance(da, db);
    out.profile.push_back(tv);
    if (tv > out.max_tv) {
      out.max_tv = tv;
      out.argmax = m;
    }
  }
  return out;
}

UniformBoundReport certified_uniform_bound(
    const StochasticMatrix& a, const StochasticMatrix& b_ref,
    const ProbDist& pi_a, const ProbDist& pi_b, StateIndex x,
    std::size_t horizon, double residual_tol) {
  require_same_dimension(a, b_ref);
  require_stationary(pi_a, a, residual_tol, "the first chain");
  require_stationary(pi_b, b_ref, residual_tol, "the reference chain");

  double max_tv = 0.0;
  ProbDist da = ProbDist::delta(x);
  ProbDist db = da;
  for (std::size_t m = 0; m <= horizon; ++m) {
    if (m > 0) {
      da = propagate(da, a);
      db = propagate(db, b_ref);
    }
    max_tv = std::max(max_tv, tv_distance(da, db));
  }

  UniformBoundReport report;
  report.horizon = horizon;
  report.term_transient = 2.0 * max_tv;
  report.term_stationary = 2.0 * tv_distance(pi_a, pi_b);
  report.term_mixing = 2.0 * tv_distance(db, pi_b);
  report.total = report.term_transient + report.term_stationary + report.term_mixing;
  return report;
}

std::vector<double> monotone_tv_profile(const StochasticMatrix& m,
                                        const ProbDist& pi, StateIndex x,
                                        std::size_t horizon) {
  require_stationary(pi, m, kStationarityResidualTol, "the chain");
  std::vector<double> profile;
  profile.reserve(horizon + 1);
  ProbDist d = ProbDist::delta(x);
  for (std::size_t step = 0; step <= horizon; ++step) {
    if (step > 0) d = propagate(d, m);
    double tv = tv_distance(d, pi);
    if (!profile.empty() && tv > profile.back() + kMonotoneSlack) {
      throw ConsistencyError(
          "TV to the stationary law increased at step " + std::to_string(step) +
          " by " + std::to_string(tv - profile.back()) +
          "; stationarity or arithmetic bug");
    }
    profile.push_back(tv);
  }
  return profile;
}

double weighted_uniform_bound(const StochasticMatrix& a,
                              const StochasticMatrix& b_ref,
                              const ProbDist& pi_a, const ProbDist& pi_b,
                              StateIndex x, std::size_t horizon,
                              const WeightFunction& w, double b,
                              double residual_tol) {
  if (b < 1.0) throw PreconditionError("threshold b must be >= 1");
  double px_a = pi_a.mass_at(x);
  double px_b = pi_b.mass_at(x);
  if (px_a <= 0.0 || px_b <= 0.0) {
    throw PreconditionError("stationary mass at x = " + std::to_string(x) +
                            " must be positive for both chains");
  }
  UniformBoundReport base =
      certified_uniform_bound(a, b_ref, pi_a, pi_b, x, horizon, residual_tol);

  auto tail = [&](const ProbDist& pi) {
    double t = 0.0;
    for (const auto& [y, mass] : pi.support()) {
      double wy = w(y);
      if (wy > b) t += wy * mass;
    }
    return t;
  };
  double tail_term = 2.0 * std::max(tail(pi_a), tail(pi_b)) / std::min(px_a, px_b);
  return b * base.total + tail_term;
}

std::vector<DiagonalProbeRow> diagonal_probe(
    const std::vector<std::pair<std::size_t, StochasticMatrix>>& family,
    const std::vector<std::size_t>& schedule, StateIndex x,
    const ProbDist& target) {
  if (schedule.size() != family.size()) {
    throw DimensionError("schedule length differs from family size");
  }
  if (!std::is_sorted(schedule.begin(), schedule.end())) {
    throw PreconditionError("schedule must be non-decreasing");
  }
  if (!schedule.empty() && schedule.front() == schedule.back()) {
    throw PreconditionError("schedule must grow (constant schedules do not probe the diagonal)");
  }
  std::vector<DiagonalProbeRow> rows;
  rows.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& [n, matrix] = family[i];
    ProbDist d = marginal(matrix, x, schedule[i]);
    rows.push_back({n, schedule[i], tv_distance(d, target)});
  }
  return rows;
}

}  // namespace markov
