#include "markov/jump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace markov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

RateMatrix::RateMatrix(std::size_t n, std::vector<Row> rows)
    : n_(n), rows_(std::move(rows)) {
  if (n_ == 0) throw DimensionError("rate matrix dimension must be positive");
  if (rows_.size() != n_) {
    throw DimensionError("expected " + std::to_string(n_) + " rows, got " +
                         std::to_string(rows_.size()));
  }
  for (StateIndex x = 0; x < n_; ++x) {
    auto& row = rows_[x];
    std::sort(row.begin(), row.end(),
              [](const Entry& a, const Entry& b) { return a.col < b.col; });
    Row merged;
    for (const auto& e : row) {
      if (e.col >= n_) {
        throw DimensionError("row " + std::to_string(x) + " references column " +
                             std::to_string(e.col));
      }
      if (e.rate == 0.0 && e.col != x) continue;
      if (!merged.empty() && merged.back().col == e.col) {
        merged.back().rate += e.rate;
      } else {
        merged.push_back(e);
      }
    }
    row = std::move(merged);
  }
}

RateMatrix RateMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  std::vector<Row> sparse(rows.size());
  for (StateIndex x = 0; x < rows.size(); ++x) {
    for (StateIndex y = 0; y < rows[x].size(); ++y) {
      if (rows[x][y] != 0.0 || x == y) sparse[x].push_back({y, rows[x][y]});
    }
  }
  return RateMatrix(rows.size(), std::move(sparse));
}

const RateMatrix::Row& RateMatrix::row(StateIndex x) const {
  if (x >= n_) throw DimensionError("row index out of range");
  return rows_[x];
}

double RateMatrix::at(StateIndex r, StateIndex c) const {
  for (const auto& e : row(r)) {
    if (e.col == c) return e.rate;
  }
  return 0.0;
}

double RateMatrix::exit_rate(StateIndex x) const {
  double diag = at(x, x);
  return diag < 0.0 ? -diag : 0.0;
}

RateValidationReport validate_rate_matrix(const RateMatrix& q, double tol) {
  if (tol <= 0.0) throw PreconditionError("tol must be positive");
  RateValidationReport report;
  for (StateIndex x = 0; x < q.dimension(); ++x) {
    double sum = 0.0;
    double min_off = 0.0;
    for (const auto& e : q.row(x)) {
      if (!std::isfinite(e.rate)) {
        report.rows.push_back({x, kInf, -kInf});
        sum = 0.0;
        min_off = 0.0;
        break;
      }
      sum += e.rate;
      if (e.col != x) min_off = std::min(min_off, e.rate);
    }
    if (std::abs(sum) > tol || min_off < -tol) {
      report.rows.push_back({x, sum, min_off});
    }
  }
  return report;
}

JumpChain embedded_chain(const RateMatrix& q) {
  const std::size_t n = q.dimension();
  std::vector<double> lambda(n, 0.0);
  std::vector<StochasticMatrix::Row> rows(n);
  for (StateIndex x = 0; x < n; ++x) {
    lambda[x] = q.exit_rate(x);
    if (lambda[x] == 0.0) {
      rows[x].push_back({x, 1.0});
      continue;
    }
    for (const auto& e : q.row(x)) {
      if (e.col == x || e.rate == 0.0) continue;
      rows[x].push_back({e.col, e.rate / lambda[x]});
    }
  }
  return JumpChain{std::move(lambda), StochasticMatrix(n, std::move(rows))};
}

StochasticMatrix uniformized(const RateMatrix& q, double lambda) {
  if (lambda <= 0.0) throw PreconditionError("uniformization rate must be positive");
  const std::size_t n = q.dimension();
  std::vector<StochasticMatrix::Row> rows(n);
  for (StateIndex x = 0; x < n; ++x) {
    double diag = 1.0;
    for (const auto& e : q.row(x)) {
      if (e.col == x) {
        diag += e.rate / lambda;
      } else if (e.rate != 0.0) {
        rows[x].push_back({e.col, e.rate / lambda});
      }
    }
    if (diag < 0.0 && diag > -1e-14) diag = 0.0;
    if (diag < 0.0) {
      throw PreconditionError("uniformization rate below exit rate of state " +
                              std::to_string(x));
    }
    if (diag > 0.0) rows[x].push_back({x, diag});
  }
  return StochasticMatrix(n, std::move(rows));
}

ProbDist transient(const RateMatrix& q, StateIndex x, double t, double eps) {
  if (x >= q.dimension()) throw DimensionError("start state out of range");
  if (t < 0.0) throw PreconditionError("time must be non-negative");
  if (eps <= 0.0) throw PreconditionError("eps must be positive");

  double lambda = 0.0;
  for (StateIndex y = 0; y < q.dimension(); ++y) {
    lambda = std::max(lambda, q.exit_rate(y));
  }
  if (lambda == 0.0 || t == 0.0) return ProbDist::delta(x);

  const StochasticMatrix p = uniformized(q, lambda);
  const double rate = lambda * t;

  // Poisson weights by the stable recurrence in log space; the truncation
  // index K is chosen so the geometric tail bound
  //   w_{K+1} / (1 - rate/(K+2))
  // falls below eps.
  std::vector<double> acc(q.dimension(), 0.0);
  ProbDist power = ProbDist::delta(x);
  double log_weight = -rate;  // log of the k=0 weight
  double covered = 0.0;
  const std::size_t k_max =
      static_cast<std::size_t>(rate + 40.0 * std::sqrt(rate + 10.0) + 100.0);
  for (std::size_t k = 0;; ++k) {
    double w = std::exp(log_weight);
    if (w > 0.0) {
      for (const auto& [s, mass] : power.support()) acc[s] += w * mass;
      covered += w;
    }
    double log_next = log_weight + std::log(rate) - std::log(static_cast<double>(k + 1));
    bool tail_ok = false;
    if (static_cast<double>(k) + 2.0 > rate) {
      double tail = std::exp(log_next) / (1.0 - rate / (static_cast<double>(k) + 2.0));
      tail_ok = tail < eps;
    }
    if (tail_ok) break;
    if (k >= k_max) {
      throw ConvergenceError("Poisson truncation failed to reach eps", acc,
                             1.0 - covered);
    }
    power = propagate(power, p);
    log_weight = log_next;
  }
  if (1.0 - covered >= eps) {
    throw ConsistencyError("uniformization mass deficit exceeds eps");
  }
  return ProbDist::from_dense(acc, 1.0);  // deficit < eps; renormalize
}

double ctmc_stationarity_residual(const ProbDist& pi, const RateMatrix& q) {
  std::vector<double> acc(q.dimension(), 0.0);
  for (const auto& [state, mass] : pi.support()) {
    if (state >= q.dimension()) throw DimensionError("support outside dimension");
    for (const auto& e : q.row(state)) acc[e.col] += mass * e.rate;
  }
  double residual = 0.0;
  for (double v : acc) residual = std::max(residual, std::abs(v));
  return residual;
}

CtmcUniformBoundReport ctmc_certified_uniform_bound(
    const RateMatrix& q_a, const RateMatrix& q_ref, const ProbDist& pi_a,
    const ProbDist& pi_ref, StateIndex x, std::size_t skeleton_horizon,
    double eps, double skeleton_step) {
  if (q_a.dimension() != q_ref.dimension()) {
    throw DimensionError("generators have different dimensions");
  }
  if (skeleton_step <= 0.0) throw PreconditionError("skeleton step must be positive");
  for (const auto* q : {&q_a, &q_ref}) {
    if (!validate_rate_matrix(*q, 1e-9).ok()) {
      throw PreconditionError("generator fails rate-matrix validation");
    }
  }
  if (ctmc_stationarity_residual(pi_a, q_a) >= kStationarityResidualTol ||
      ctmc_stationarity_residual(pi_ref, q_ref) >= kStationarityResidualTol) {
    throw PreconditionError("stationarity residual too large for a generator");
  }

  auto skeleton = [&](const RateMatrix& q) {
    std::vector<StochasticMatrix::Row> rows(q.dimension());
    for (StateIndex y = 0; y < q.dimension(); ++y) {
      ProbDist row = transient(q, y, skeleton_step, eps);
      for (const auto& [col, prob] : row.support()) rows[y].push_back({col, prob});
    }
    return StochasticMatrix(q.dimension(), std::move(rows));
  };
  StochasticMatrix skel_a = skeleton(q_a);
  StochasticMatrix skel_ref = skeleton(q_ref);

  // pi is stationary for the exact skeleton; allow for the row truncation
  // when re-checking it against the computed skeleton.
  double residual_tol = std::max(kStationarityResidualTol,
                                 4.0 * eps * static_cast<double>(q_a.dimension()));
  CtmcUniformBoundReport report;
  report.skeleton = certified_uniform_bound(skel_a, skel_ref, pi_a, pi_ref, x,
                                            skeleton_horizon, residual_tol);
  report.truncation_slack = 4.0 * eps * static_cast<double>(q_a.dimension());
  return report;
}

double ctmc_fte(const RateMatrix& q, const RewardSpec& spec, StateIndex x,
                double tol, double cap, std::size_t max_iters) {
  if (!validate_rate_matrix(q, 1e-9).ok()) {
    throw PreconditionError("generator fails rate-matrix validation");
  }
  const std::size_t n = q.dimension();
  std::vector<char> mask(n, 0);
  for (StateIndex s : spec.continue_region) {
    if (s >= n) throw DimensionError("continue region outside dimension");
    mask[s] = 1;
  }
  if (x >= n || !mask[x]) {
    throw PreconditionError("start state must lie in the continue region");
  }

  JumpChain chain = embedded_chain(q);

  // Transformed first-transition system on the embedded chain. The pinned
  // exit value is 0: the integral stops at the exit instant and collects
  // nothing there.
  std::vector<std::ptrdiff_t> compact_of(n, -1);
  std::vector<StateIndex> c_states;
  for (StateIndex y = 0; y < n; ++y) {
    if (mask[y]) {
      compact_of[y] = static_cast<std::ptrdiff_t>(c_states.size());
      c_states.push_back(y);
    }
  }
  std::vector<std::vector<StochasticMatrix::Entry>> g_rows(c_states.size());
  std::vector<double> base(c_states.size(), 0.0);
  bool start_infinite = false;
  for (std::size_t i = 0; i < c_states.size(); ++i) {
    StateIndex y = c_states[i];
    double lambda = chain.holding_rates[y];
    double alpha = spec.discount_rate(y);
    double reward = spec.reward(y);
    if (!(alpha >= 0.0) || !(reward >= 0.0) || !std::isfinite(reward)) {
      throw PreconditionError("reward/discount invalid at state " + std::to_string(y));
    }
    double denom = lambda + alpha;
    if (denom == 0.0) {
      // absorbed inside C with no discounting
      if (reward > 0.0) {
        if (y == x) start_infinite = true;
        base[i] = kInf;
      } else {
        base[i] = 0.0;
      }
      continue;
    }
    base[i] = reward / denom;
    double factor = lambda / denom;
    if (factor == 0.0) continue;
    for (const auto& e : chain.jump_matrix.row(y)) {
      if (e.col == y) continue;  // absorbing convention row has only the diagonal
      if (mask[e.col]) {
        g_rows[i].push_back({static_cast<StateIndex>(compact_of[e.col]),
                             factor * e.prob});
      }
      // exits contribute nothing
    }
  }
  if (start_infinite) return kInf;

  MinimalSolveResult res =
      minimal_affine_solution(g_rows, base, tol, cap, max_iters);
  return res.u[static_cast<std::size_t>(compact_of[x])];
}

}  // namespace markov
