#include "markov/chain_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace markov {

namespace {

std::string state_str(StateIndex x) { return std::to_string(x); }

}  // namespace

ProbDist ProbDist::delta(StateIndex x) {
  return ProbDist({{x, 1.0}});
}

ProbDist ProbDist::from_pairs(std::vector<Entry> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::vector<Entry> merged;
  merged.reserve(pairs.size());
  for (const auto& [state, mass] : pairs) {
    if (!std::isfinite(mass)) throw PreconditionError("non-finite mass at state " + state_str(state));
    if (mass < 0.0) throw PreconditionError("negative mass at state " + state_str(state));
    if (mass == 0.0) continue;
    if (!merged.empty() && merged.back().first == state) {
      merged.back().second += mass;
    } else {
      merged.emplace_back(state, mass);
    }
  }
  double total = 0.0;
  for (const auto& e : merged) total += e.second;
  if (std::abs(total - 1.0) > kMassTol) {
    throw PreconditionError("masses sum to " + std::to_string(total) +
                            ", outside 1 +/- 1e-12");
  }
  return ProbDist(std::move(merged));
}

ProbDist ProbDist::from_dense(const std::vector<double>& masses, double drift_tol) {
  double total = 0.0;
  for (double v : masses) {
    if (v < 0.0) throw PreconditionError("negative mass in dense vector");
    total += v;
  }
  if (std::abs(total - 1.0) > drift_tol) {
    throw ConsistencyError("mass drift " + std::to_string(total - 1.0) +
                           " exceeds allowed " + std::to_string(drift_tol));
  }
  std::vector<Entry> support;
  for (StateIndex x = 0; x < masses.size(); ++x) {
    if (masses[x] > 0.0) support.emplace_back(x, masses[x] / total);
  }
  return ProbDist(std::move(support));
}

double ProbDist::mass_at(StateIndex x) const {
  auto it = std::lower_bound(
      support_.begin(), support_.end(), x,
      [](const Entry& e, StateIndex s) { return e.first < s; });
  if (it != support_.end() && it->first == x) return it->second;
  return 0.0;
}

StateIndex ProbDist::max_state() const {
  if (support_.empty()) throw ConsistencyError("empty distribution");
  return support_.back().first;
}

std::vector<double> ProbDist::to_dense(std::size_t dimension) const {
  std::vector<double> out(dimension, 0.0);
  for (const auto& [state, mass] : support_) {
    if (state >= dimension) {
      throw DimensionError("support state " + state_str(state) +
                           " outside dimension " + std::to_string(dimension));
    }
    out[state] = mass;
  }
  return out;
}

StochasticMatrix::StochasticMatrix(std::size_t n, std::vector<Row> rows)
    : n_(n), rows_(std::move(rows)) {
  if (n_ == 0) throw DimensionError("matrix dimension must be positive");
  if (rows_.size() != n_) {
    throw DimensionError("expected " + std::to_string(n_) + " rows, got " +
                         std::to_string(rows_.size()));
  }
  for (StateIndex x = 0; x < n_; ++x) {
    auto& row = rows_[x];
    std::sort(row.begin(), row.end(),
              [](const Entry& a, const Entry& b) { return a.col < b.col; });
    Row merged;
    merged.reserve(row.size());
    for (const auto& e : row) {
      if (e.col >= n_) {
        throw DimensionError("row " + state_str(x) + " references column " +
                             state_str(e.col) + " >= " + std::to_string(n_));
      }
      if (e.prob == 0.0) continue;
      if (!merged.empty() && merged.back().col == e.col) {
        merged.back().prob += e.prob;
      } else {
        merged.push_back(e);
      }
    }
    row = std::move(merged);
  }
}

StochasticMatrix StochasticMatrix::from_dense(
    const std::vector<std::vector<double>>& rows) {
  std::vector<Row> sparse(rows.size());
  for (StateIndex x = 0; x < rows.size(); ++x) {
    for (StateIndex y = 0; y < rows[x].size(); ++y) {
      if (rows[x][y] != 0.0) sparse[x].push_back({y, rows[x][y]});
    }
  }
  return StochasticMatrix(rows.size(), std::move(sparse));
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
  std::vector<Row> rows(n);
  for (StateIndex x = 0; x < n; ++x) rows[x].push_back({x, 1.0});
  return StochasticMatrix(n, std::move(rows));
}

const StochasticMatrix::Row& StochasticMatrix::row(StateIndex x) const {
  if (x >= n_) {
    throw DimensionError("row index " + state_str(x) + " >= " + std::to_string(n_));
  }
  return rows_[x];
}

double StochasticMatrix::at(StateIndex r, StateIndex c) const {
  for (const auto& e : row(r)) {
    if (e.col == c) return e.prob;
  }
  return 0.0;
}

double WeightFunction::operator()(StateIndex x) const {
  double v = w_(x);
  if (!(v >= 1.0)) {
    throw PreconditionError("weight w(" + state_str(x) + ") = " +
                            std::to_string(v) + " is below 1");
  }
  return v;
}

ValidationReport validate_stochastic(const StochasticMatrix& m, double tol) {
  if (tol <= 0.0) throw PreconditionError("tol must be positive");
  ValidationReport report;
  for (StateIndex x = 0; x < m.dimension(); ++x) {
    double sum = 0.0;
    double min_entry = 0.0;
    for (const auto& e : m.row(x)) {
      sum += e.prob;
      min_entry = std::min(min_entry, e.prob);
    }
    if (std::abs(sum - 1.0) > tol || min_entry < -tol) {
      report.rows.push_back({x, sum - 1.0, min_entry});
    }
  }
  return report;
}

StochasticMatrix clamp_and_renormalize(const StochasticMatrix& m, double tol) {
  if (tol <= 0.0) throw PreconditionError("tol must be positive");
  std::vector<StochasticMatrix::Row> rows(m.dimension());
  for (StateIndex x = 0; x < m.dimension(); ++x) {
    double sum = 0.0;
    for (const auto& e : m.row(x)) {
      double p = e.prob;
      if (p < 0.0 && p > -tol) p = 0.0;
      if (p != 0.0) rows[x].push_back({e.col, p});
      sum += p;
    }
    if (sum > 0.0) {
      for (auto& e : rows[x]) e.prob /= sum;
    }
  }
  return StochasticMatrix(m.dimension(), std::move(rows));
}

ProbDist propagate(const ProbDist& d, const StochasticMatrix& m) {
  std::vector<double> acc(m.dimension(), 0.0);
  for (const auto& [state, mass] : d.support()) {
    if (state >= m.dimension()) {
      throw DimensionError("distribution support " + state_str(state) +
                           " outside matrix dimension " +
                           std::to_string(m.dimension()));
    }
    for (const auto& e : m.row(state)) acc[e.col] += mass * e.prob;
  }
  return ProbDist::from_dense(acc, kRenormDriftTol);
}

ProbDist marginal(const StochasticMatrix& m, StateIndex x, std::size_t steps) {
  if (x >= m.dimension()) {
    throw DimensionError("start state " + state_str(x) + " outside dimension " +
                         std::to_string(m.dimension()));
  }
  ProbDist d = ProbDist::delta(x);
  for (std::size_t i = 0; i < steps; ++i) d = propagate(d, m);
  return d;
}

namespace {

// Merge walk over two sorted supports, applying f(y, a_mass, b_mass) on the
// union support.
template <typename F>
void for_union_support(const ProbDist& a, const ProbDist& b, F&& f) {
  const auto& sa = a.support();
  const auto& sb = b.support();
  std::size_t i = 0, j = 0;
  while (i < sa.size() || j < sb.size()) {
    if (j == sb.size() || (i < sa.size() && sa[i].first < sb[j].first)) {
      f(sa[i].first, sa[i].second, 0.0);
      ++i;
    } else if (i == sa.size() || sb[j].first < sa[i].first) {
      f(sb[j].first, 0.0, sb[j].second);
      ++j;
    } else {
      f(sa[i].first, sa[i].second, sb[j].second);
      ++i;
      ++j;
    }
  }
}

}  // namespace

double tv_distance(const ProbDist& a, const ProbDist& b) {
  double total = 0.0;
  for_union_support(a, b, [&](StateIndex, double ma, double mb) {
    total += std::abs(ma - mb);
  });
  return total;
}

double weighted_tv_distance(const ProbDist& a, const ProbDist& b,
                            const WeightFunction& w) {
  double total = 0.0;
  for_union_support(a, b, [&](StateIndex y, double ma, double mb) {
    total += w(y) * std::abs(ma - mb);
  });
  return total;
}

double stationarity_residual(const ProbDist& pi, const StochasticMatrix& m) {
  std::vector<double> acc(m.dimension(), 0.0);
  for (const auto& [state, mass] : pi.support()) {
    if (state >= m.dimension()) {
      throw DimensionError("stationary support outside matrix dimension");
    }
    for (const auto& e : m.row(state)) acc[e.col] += mass * e.prob;
  }
  for (const auto& [state, mass] : pi.support()) acc[state] -= mass;
  double total = 0.0;
  for (double v : acc) total += std::abs(v);
  return total;
}

}  // namespace markov
