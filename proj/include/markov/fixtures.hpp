#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "markov/chain_core.hpp"
#include "markov/jump.hpp"

namespace markov {

// ---------------------------------------------------------------------------
// Random number plumbing. All samplers take explicit 64-bit seeds; samples
// are split into fixed-size streams so results are merge-deterministic for a
// fixed (seed, stream count) regardless of execution order.
// ---------------------------------------------------------------------------

// Canonical uniform in [0, 1) built from the top 53 bits of the engine.
double uniform01(std::mt19937_64& rng);

// Engine seeded independently per (seed, stream) pair.
std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream);

// ---------------------------------------------------------------------------
// Atomic measures on the real line.
// ---------------------------------------------------------------------------

/// Finitely supported probability measure on the reals: sorted deduplicated
/// atom locations with positive masses summing to 1 within 1e-12.
class AtomicMeasure {
 public:
  using Atom = std::pair<double, double>;  // (location, mass)

  static AtomicMeasure delta(double location);
  static AtomicMeasure from_atoms(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double mass_at(double location) const;  // exact location match

 private:
  explicit AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
  std::vector<Atom> atoms_;
};

// Wasserstein-1 distance between atomic measures on the line, by integrating
// the absolute CDF difference over the merged breakpoints.
double w1_distance(const AtomicMeasure& a, const AtomicMeasure& b);

// ---------------------------------------------------------------------------
// Halving chain on [0, 1] with a dyadic jump band: the family whose marginal
// sups do not converge even though its stationary laws do. `n` selects a
// family member; nullopt selects the pure-halving limit kernel.
// ---------------------------------------------------------------------------

// One transition step from x. For finite n: points above 2^-n halve; points
// in (2^-(n+1), 2^-n] jump to 1; points at or below 2^-(n+1) land uniformly
// on {2^-j : 0 <= j <= n}. The limit kernel halves everywhere.
AtomicMeasure counterexample_step(std::optional<unsigned> n, double x);

// Exact m-step pushforward of delta_x (atom supports stay finite).
AtomicMeasure counterexample_marginal(std::optional<unsigned> n, double x,
                                      std::size_t m);

// Smallest k >= 0 with x * 2^-k inside the jump band (2^-(n+1), 2^-n].
// Requires x > 2^-n.
unsigned hitting_step_count(unsigned n, double x);

// Stationary law of family member n: uniform on {2^-j : 0 <= j <= n}.
AtomicMeasure counterexample_stationary(unsigned n);

struct CounterexampleReport {
  double w1_pi_n_to_delta0;  // W1 distance from the member's stationary law to delta_0
  double probe_mass_at_1;    // mass at 1 one step after entering the jump band
  unsigned hitting_steps;
};

CounterexampleReport counterexample_report(unsigned n, double x);

// ---------------------------------------------------------------------------
// Waiting-time chain X_{m+1} = max(X_m + Z, 0) of a single-server queue.
// ---------------------------------------------------------------------------

/// Increment law given as a map from a canonical uniform, so two
/// specifications driven by the same uniforms are coupled path by path.
struct LindleySpec {
  std::function<double(double)> increment;  // u in [0,1) -> Z

  // Sample-mean drift check: requires mean + 3 stderr < 0.
  bool drift_ok(std::uint64_t seed, std::size_t samples = 100000) const;
};

struct CoupledDistanceResult {
  std::vector<double> mean;    // per-step sample mean of |X_a - X_b| clipped at 2
  std::vector<double> stderr_; // per-step standard errors
  double sup = 0.0;            // max of mean over steps
  std::size_t argmax = 0;
  double sup_stderr = 0.0;
};

// Simulates both chains from x with common random numbers; the clipped
// coupled distance is a consistent upper bound on the bounded-Lipschitz
// distance between the two marginals at each step.
CoupledDistanceResult lindley_coupled_sup_distance(const LindleySpec& spec_a,
                                                   const LindleySpec& spec_b,
                                                   double x, std::size_t horizon,
                                                   std::size_t samples,
                                                   std::uint64_t seed);

struct LindleyStationarySample {
  AtomicMeasure dist;
  double barrier;      // walk stopped once it fell below -barrier
  double tail_bound;   // estimated probability the stopped maximum is short
};

// Samples the all-time maximum of the increment random walk (the stationary
// waiting time). Each walk runs until it falls below a barrier chosen so the
// estimated chance of a later record is below tail_prob, via an exponential
// tilt fitted to pilot draws.
LindleyStationarySample lindley_stationary_sample(const LindleySpec& spec,
                                                  std::size_t samples,
                                                  std::uint64_t seed,
                                                  double tail_prob = 1e-6);

// ---------------------------------------------------------------------------
// Contractive iterated function systems on the line.
// ---------------------------------------------------------------------------

/// A family of random maps phi with E|phi(x) - phi(y)| <= ratio * |x - y|.
struct IfsSpec {
  std::function<std::function<double(double)>(std::mt19937_64&)> sample_map;
  double contraction_ratio;
};

struct IfsBackwardResult {
  std::vector<double> samples;   // independent draws of the depth-k backward composition
  double tail_bound;             // ratio^k/(1-ratio) * sample mean of |phi(x) - x|
  double mean_displacement;      // the sample mean used in the bound
};

// Backward compositions phi_1(phi_2(...phi_k(x)...)) from independent draws.
IfsBackwardResult ifs_backward(const IfsSpec& spec, std::size_t k, double x,
                               std::size_t samples, std::uint64_t seed);

// Sample mean and standard error of |phi(x) - phi(y)| for validating the
// contraction ratio.
std::pair<double, double> ifs_contraction_estimate(const IfsSpec& spec, double x,
                                                   double y, std::size_t samples,
                                                   std::uint64_t seed);

// ---------------------------------------------------------------------------
// Discrete fixtures with closed-form stationary behavior.
// ---------------------------------------------------------------------------

// Reflected random walk on the non-negative integers: up with probability p,
// down (or stay, at 0) otherwise. For p < 1/2 the stationary law is geometric
// with ratio p/(1-p).
CountableKernel birth_death_kernel(double p);

// Single-queue generator truncated to `n` states and embedded in an ambient
// dimension: arrivals at `arrival`, services at `service`; states at or above
// the truncation jump back to 0 at unit rate so the prefix is absorbing.
RateMatrix mm1_rate_matrix(double arrival, double service, std::size_t n,
                           std::size_t ambient_dim = 0);

}  // namespace markov
