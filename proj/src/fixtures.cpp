#include "markov/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace markov {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over the (seed, stream) pair; avoids correlated engines for
  // adjacent streams.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return std::mt19937_64(z);
}

AtomicMeasure AtomicMeasure::delta(double location) {
  return AtomicMeasure({{location, 1.0}});
}

AtomicMeasure AtomicMeasure::from_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end());
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const auto& [loc, mass] : atoms) {
    if (!std::isfinite(loc)) throw PreconditionError("non-finite atom location");
    if (mass < 0.0) throw PreconditionError("negative atom mass");
    if (mass == 0.0) continue;
    if (!merged.empty() && merged.back().first == loc) {
      merged.back().second += mass;
    } else {
      merged.emplace_back(loc, mass);
    }
  }
  double total = 0.0;
  for (const auto& a : merged) total += a.second;
  if (std::abs(total - 1.0) > 1e-12) {
    throw PreconditionError("atom masses sum to " + std::to_string(total));
  }
  return AtomicMeasure(std::move(merged));
}

double AtomicMeasure::mass_at(double location) const {
  for (const auto& [loc, mass] : atoms_) {
    if (loc == location) return mass;
    if (loc > location) break;
  }
  return 0.0;
}

double w1_distance(const AtomicMeasure& a, const AtomicMeasure& b) {
  // integral over x of |F_a(x) - F_b(x)|, piecewise constant between atoms
  const auto& atoms_a = a.atoms();
  const auto& atoms_b = b.atoms();
  std::size_t i = 0, j = 0;
  double cdf_a = 0.0, cdf_b = 0.0;
  double distance = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  while (i < atoms_a.size() || j < atoms_b.size()) {
    double x;
    if (j == atoms_b.size() || (i < atoms_a.size() && atoms_a[i].first < atoms_b[j].first)) {
      x = atoms_a[i].first;
    } else {
      x = atoms_b[j].first;
    }
    if (have_prev) distance += std::abs(cdf_a - cdf_b) * (x - prev);
    while (i < atoms_a.size() && atoms_a[i].first == x) cdf_a += atoms_a[i++].second;
    while (j < atoms_b.size() && atoms_b[j].first == x) cdf_b += atoms_b[j++].second;
    prev = x;
    have_prev = true;
  }
  return distance;
}

AtomicMeasure counterexample_step(std::optional<unsigned> n, double x) {
  if (x < 0.0 || x > 1.0) throw PreconditionError("state must lie in [0, 1]");
  if (!n) return AtomicMeasure::delta(x / 2.0);
  const double band_high = std::ldexp(1.0, -static_cast<int>(*n));
  const double band_low = std::ldexp(1.0, -static_cast<int>(*n) - 1);
  if (x > band_high) return AtomicMeasure::delta(x / 2.0);
  if (x > band_low) return AtomicMeasure::delta(1.0);
  std::vector<AtomicMeasure::Atom> atoms;
  const double mass = 1.0 / static_cast<double>(*n + 1);
  for (unsigned j = 0; j <= *n; ++j) {
    atoms.emplace_back(std::ldexp(1.0, -static_cast<int>(j)), mass);
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

AtomicMeasure counterexample_marginal(std::optional<unsigned> n, double x,
                                      std::size_t m) {
  AtomicMeasure current = AtomicMeasure::delta(x);
  for (std::size_t step = 0; step < m; ++step) {
    std::map<double, double> next;
    for (const auto& [loc, mass] : current.atoms()) {
      AtomicMeasure one_step = counterexample_step(n, loc);
      for (const auto& [loc2, mass2] : one_step.atoms()) {
        next[loc2] += mass * mass2;
      }
    }
    std::vector<AtomicMeasure::Atom> atoms(next.begin(), next.end());
    current = AtomicMeasure::from_atoms(std::move(atoms));
  }
  return current;
}

unsigned hitting_step_count(unsigned n, double x) {
  const double band_high = std::ldexp(1.0, -static_cast<int>(n));
  const double band_low = std::ldexp(1.0, -static_cast<int>(n) - 1);
  // halving from x can land in (band_low, band_high] iff x starts above
  // band_low; points already inside the band count as 0 steps
  if (!(x > band_low)) {
    throw PreconditionError("state " + std::to_string(x) +
                            " lies at or below the jump band");
  }
  double y = x;
  for (unsigned k = 0; k < 2100; ++k) {
    if (y > band_low && y <= band_high) return k;
    y *= 0.5;  // exact scaling
  }
  throw ConsistencyError("halving failed to reach the jump band");
}

AtomicMeasure counterexample_stationary(unsigned n) {
  std::vector<AtomicMeasure::Atom> atoms;
  const double mass = 1.0 / static_cast<double>(n + 1);
  for (unsigned j = 0; j <= n; ++j) {
    atoms.emplace_back(std::ldexp(1.0, -static_cast<int>(j)), mass);
  }
  return AtomicMeasure::from_atoms(std::move(atoms));
}

CounterexampleReport counterexample_report(unsigned n, double x) {
  CounterexampleReport report;
  report.hitting_steps = hitting_step_count(n, x);
  report.w1_pi_n_to_delta0 =
      w1_distance(counterexample_stationary(n), AtomicMeasure::delta(0.0));
  AtomicMeasure probe = counterexample_marginal(n, x, report.hitting_steps + 1);
  report.probe_mass_at_1 = probe.mass_at(1.0);
  return report;
}

bool LindleySpec::drift_ok(std::uint64_t seed, std::size_t samples) const {
  std::mt19937_64 rng = stream_engine(seed, 0);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double z = increment(uniform01(rng));
    sum += z;
    sumsq += z * z;
  }
  double mean = sum / static_cast<double>(samples);
  double var = std::max(0.0, sumsq / static_cast<double>(samples) - mean * mean);
  double se = std::sqrt(var / static_cast<double>(samples));
  return mean + 3.0 * se < 0.0;
}

namespace {

constexpr std::size_t kStreamChunk = 1024;  // samples per stream

}  // namespace

CoupledDistanceResult lindley_coupled_sup_distance(const LindleySpec& spec_a,
                                                   const LindleySpec& spec_b,
                                                   double x, std::size_t horizon,
                                                   std::size_t samples,
                                                   std::uint64_t seed) {
  if (samples < 100) throw PreconditionError("need at least 100 sample paths");
  std::vector<double> sum(horizon + 1, 0.0), sumsq(horizon + 1, 0.0);

  const std::size_t streams = (samples + kStreamChunk - 1) / kStreamChunk;
  std::size_t done = 0;
  for (std::size_t s = 0; s < streams; ++s) {
    std::mt19937_64 rng = stream_engine(seed, s);
    std::size_t count = std::min(kStreamChunk, samples - done);
    done += count;
    for (std::size_t i = 0; i < count; ++i) {
      double xa = x, xb = x;
      for (std::size_t m = 0; m <= horizon; ++m) {
        double d = std::min(std::abs(xa - xb), 2.0);
        sum[m] += d;
        sumsq[m] += d * d;
        if (m == horizon) break;
        double u = uniform01(rng);
        xa = std::max(xa + spec_a.increment(u), 0.0);
        xb = std::max(xb + spec_b.increment(u), 0.0);
      }
    }
  }

  CoupledDistanceResult out;
  out.mean.resize(horizon + 1);
  out.stderr_.resize(horizon + 1);
  const double ns = static_cast<double>(samples);
  for (std::size_t m = 0; m <= horizon; ++m) {
    double mean = sum[m] / ns;
    double var = std::max(0.0, sumsq[m] / ns - mean * mean);
    out.mean[m] = mean;
    out.stderr_[m] = std::sqrt(var / ns);
    if (mean > out.sup) {
      out.sup = mean;
      out.argmax = m;
      out.sup_stderr = out.stderr_[m];
    }
  }
  return out;
}

LindleyStationarySample lindley_stationary_sample(const LindleySpec& spec,
                                                  std::size_t samples,
                                                  std::uint64_t seed,
                                                  double tail_prob) {
  if (!spec.drift_ok(seed)) {
    throw PreconditionError("drift check failed: increment mean not clearly negative");
  }

  // Fit the exponential tilt theta with E exp(theta Z) = 1 on pilot draws;
  // exp(-theta B) then bounds the chance that the walk ever climbs back above
  // its minimum by B, which sizes the stopping barrier.
  std::mt19937_64 pilot_rng = stream_engine(seed, ~0ULL);
  const std::size_t pilot = 100000;
  std::vector<double> draws(pilot);
  for (double& z : draws) z = spec.increment(uniform01(pilot_rng));
  auto mgf = [&](double theta) {
    double acc = 0.0;
    for (double z : draws) acc += std::exp(theta * z);
    return acc / static_cast<double>(pilot);
  };
  double theta_hi = 1.0;
  const double theta_cap = 64.0;
  while (theta_hi < theta_cap && mgf(theta_hi) < 1.0) theta_hi *= 2.0;
  double theta = std::min(theta_hi, theta_cap);
  if (mgf(theta_hi) >= 1.0) {
    double lo = theta_hi / 2.0, hi = theta_hi;
    for (int iter = 0; iter < 60; ++iter) {
      double mid = 0.5 * (lo + hi);
      (mgf(mid) < 1.0 ? lo : hi) = mid;
    }
    theta = 0.5 * (lo + hi);
  }
  const double barrier = std::log(1.0 / tail_prob) / theta;

  std::vector<AtomicMeasure::Atom> atoms;
  atoms.reserve(samples);
  const double mass = 1.0 / static_cast<double>(samples);
  const std::size_t streams = (samples + kStreamChunk - 1) / kStreamChunk;
  std::size_t done = 0;
  for (std::size_t s = 0; s < streams; ++s) {
    std::mt19937_64 rng = stream_engine(seed, s);
    std::size_t count = std::min(kStreamChunk, samples - done);
    done += count;
    for (std::size_t i = 0; i < count; ++i) {
      double walk = 0.0, best = 0.0;
      std::size_t guard = 0;
      while (walk >= -barrier) {
        walk += spec.increment(uniform01(rng));
        best = std::max(best, walk);
        if (++guard > 100000000) {
          throw ConvergenceError("random walk failed to cross the barrier",
                                 {walk}, barrier);
        }
      }
      atoms.emplace_back(best, mass);
    }
  }
  return {AtomicMeasure::from_atoms(std::move(atoms)), barrier, tail_prob};
}

IfsBackwardResult ifs_backward(const IfsSpec& spec, std::size_t k, double x,
                               std::size_t samples, std::uint64_t seed) {
  IfsBackwardResult out;
  out.samples.reserve(samples);

  const std::size_t streams = (samples + kStreamChunk - 1) / kStreamChunk;
  std::size_t done = 0;
  std::vector<std::function<double(double)>> maps;
  for (std::size_t s = 0; s < streams; ++s) {
    std::mt19937_64 rng = stream_engine(seed, s);
    std::size_t count = std::min(kStreamChunk, samples - done);
    done += count;
    for (std::size_t i = 0; i < count; ++i) {
      maps.clear();
      for (std::size_t j = 0; j < k; ++j) maps.push_back(spec.sample_map(rng));
      double value = x;
      for (auto it = maps.rbegin(); it != maps.rend(); ++it) value = (*it)(value);
      out.samples.push_back(value);
    }
  }

  std::mt19937_64 disp_rng = stream_engine(seed, ~1ULL);
  double disp_sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    auto phi = spec.sample_map(disp_rng);
    disp_sum += std::abs(phi(x) - x);
  }
  out.mean_displacement = disp_sum / static_cast<double>(samples);
  out.tail_bound = std::pow(spec.contraction_ratio, static_cast<double>(k)) /
                   (1.0 - spec.contraction_ratio) * out.mean_displacement;
  return out;
}

std::pair<double, double> ifs_contraction_estimate(const IfsSpec& spec, double x,
                                                   double y, std::size_t samples,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng = stream_engine(seed, 0);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    auto phi = spec.sample_map(rng);
    double d = std::abs(phi(x) - phi(y));
    sum += d;
    sumsq += d * d;
  }
  double mean = sum / static_cast<double>(samples);
  double var = std::max(0.0, sumsq / static_cast<double>(samples) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

CountableKernel birth_death_kernel(double p) {
  if (!(p > 0.0 && p < 0.5)) {
    throw PreconditionError("up probability must lie in (0, 1/2)");
  }
  auto row_fn = [p](StateIndex x) {
    if (x == 0) return ProbDist::from_pairs({{0, 1.0 - p}, {1, p}});
    return ProbDist::from_pairs({{x - 1, 1.0 - p}, {x + 1, p}});
  };
  auto bound_fn = [](StateIndex x) { return x + 1; };
  return CountableKernel(row_fn, bound_fn);
}

RateMatrix mm1_rate_matrix(double arrival, double service, std::size_t n,
                           std::size_t ambient_dim) {
  if (arrival <= 0.0 || service <= 0.0) {
    throw PreconditionError("rates must be positive");
  }
  if (n < 1) throw PreconditionError("need at least one state");
  const std::size_t dim = ambient_dim == 0 ? n : ambient_dim;
  if (dim < n) throw DimensionError("ambient dimension smaller than truncation");

  std::vector<RateMatrix::Row> rows(dim);
  for (StateIndex x = 0; x < n; ++x) {
    double out_rate = 0.0;
    if (x + 1 < n) {
      rows[x].push_back({x + 1, arrival});
      out_rate += arrival;
    }
    if (x > 0) {
      rows[x].push_back({x - 1, service});
      out_rate += service;
    }
    rows[x].push_back({x, -out_rate});
  }
  for (StateIndex x = n; x < dim; ++x) {
    rows[x].push_back({0, 1.0});
    rows[x].push_back({x, -1.0});
  }
  return RateMatrix(dim, std::move(rows));
}

}  // namespace markov
