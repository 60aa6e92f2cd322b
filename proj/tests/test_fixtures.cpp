#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "markov/fixtures.hpp"
#include "test_util.hpp"

using namespace markov;

TEST_CASE("atomic measures deduplicate and validate") {
  AtomicMeasure m = AtomicMeasure::from_atoms({{0.5, 0.25}, {0.25, 0.5}, {0.5, 0.25}});
  REQUIRE(m.atoms().size() == 2);
  CHECK(m.atoms()[0].first == 0.25);
  CHECK(m.mass_at(0.5) == 0.5);
  CHECK(m.mass_at(0.75) == 0.0);
  CHECK_THROWS_AS(AtomicMeasure::from_atoms({{0.0, 0.5}}), PreconditionError);
  CHECK_THROWS_AS(AtomicMeasure::from_atoms({{0.0, -0.5}, {1.0, 1.5}}),
                  PreconditionError);
}

TEST_CASE("w1 distance on the line") {
  CHECK(w1_distance(AtomicMeasure::delta(0.25), AtomicMeasure::delta(1.0)) == 0.75);
  AtomicMeasure pair = AtomicMeasure::from_atoms({{0.0, 0.5}, {1.0, 0.5}});
  CHECK(std::abs(w1_distance(pair, AtomicMeasure::delta(0.0)) - 0.5) < 1e-15);
  CHECK(w1_distance(pair, pair) == 0.0);
  CHECK(w1_distance(pair, AtomicMeasure::delta(0.0)) ==
        w1_distance(AtomicMeasure::delta(0.0), pair));
}

TEST_CASE("counterexample step hits each branch exactly") {
  AtomicMeasure halve = counterexample_step(3u, 0.3);
  REQUIRE(halve.atoms().size() == 1);
  CHECK(halve.mass_at(0.15) == 1.0);

  AtomicMeasure jump = counterexample_step(3u, 0.1);
  CHECK(jump.mass_at(1.0) == 1.0);

  AtomicMeasure uniform = counterexample_step(3u, 0.05);
  REQUIRE(uniform.atoms().size() == 4);
  for (double loc : {1.0, 0.5, 0.25, 0.125}) CHECK(uniform.mass_at(loc) == 0.25);

  AtomicMeasure limit = counterexample_step(std::nullopt, 0.3);
  CHECK(limit.mass_at(0.15) == 1.0);
  CHECK_THROWS_AS(counterexample_step(3u, 1.5), PreconditionError);
}

TEST_CASE("counterexample marginals stay atomic and land on 1") {
  CHECK(counterexample_marginal(3u, 0.3, 0).mass_at(0.3) == 1.0);

  // the limit chain halves forever
  AtomicMeasure deep = counterexample_marginal(std::nullopt, 1.0, 5);
  CHECK(deep.mass_at(1.0 / 32.0) == 1.0);

  unsigned hit = hitting_step_count(3, 0.3);
  AtomicMeasure probe = counterexample_marginal(3u, 0.3, hit + 1);
  CHECK(probe.mass_at(1.0) == 1.0);
}

TEST_CASE("hitting step counts follow the halving dynamics") {
  CHECK(hitting_step_count(3, 1.0) == 3);
  CHECK(hitting_step_count(3, 0.3) == 2);
  CHECK(hitting_step_count(3, 0.125) == 0);
  CHECK_THROWS_AS(hitting_step_count(3, 0.05), PreconditionError);
}

TEST_CASE("counterexample report combines both diagnostics") {
  CounterexampleReport r3 = counterexample_report(3, 0.3);
  CHECK(r3.w1_pi_n_to_delta0 == 0.46875);
  CHECK(r3.probe_mass_at_1 == 1.0);
  CHECK(r3.hitting_steps == 2);

  CounterexampleReport r7 = counterexample_report(7, 0.3);
  CHECK(std::abs(r7.w1_pi_n_to_delta0 - (2.0 - std::ldexp(1.0, -7)) / 8.0) < 1e-16);
  CHECK(r7.probe_mass_at_1 == 1.0);
}

TEST_CASE("counterexample supports stay small and on the dyadic grid") {
  const unsigned n = 5;
  const double x = 0.3;
  std::set<double> allowed;
  double y = x;
  for (unsigned k = 0; k <= 64; ++k) {
    allowed.insert(y);
    y *= 0.5;
  }
  for (unsigned j = 0; j <= n; ++j) allowed.insert(std::ldexp(1.0, -static_cast<int>(j)));
  for (std::size_t m = 0; m <= 20; ++m) {
    AtomicMeasure marg = counterexample_marginal(n, x, m);
    CHECK(marg.atoms().size() <= n + 2);
    for (const auto& [loc, mass] : marg.atoms()) {
      CHECK(allowed.count(loc) == 1);
      CHECK(mass > 0.0);
    }
  }
}

TEST_CASE("coupled lindley chains with identical specs never separate") {
  LindleySpec spec{[](double u) { return u - 0.75; }};
  auto result = lindley_coupled_sup_distance(spec, spec, 1.0, 50, 200, 99);
  CHECK(result.sup == 0.0);
  for (double v : result.mean) CHECK(v == 0.0);

  LindleySpec det{[](double) { return -1.0; }};
  auto det_result = lindley_coupled_sup_distance(det, det, 5.0, 50, 200, 99);
  CHECK(det_result.sup == 0.0);

  CHECK_THROWS_AS(lindley_coupled_sup_distance(spec, spec, 0.0, 5, 10, 1),
                  PreconditionError);
}

TEST_CASE("coupled shift family accumulates at most the shift per step") {
  const std::size_t horizon = 100;
  LindleySpec base{[](double u) { return u - 0.75; }};
  double previous = 1e9;
  for (std::size_t n : {10, 20, 40}) {
    LindleySpec member{[n](double u) {
      return u - 0.75 - 1.0 / static_cast<double>(n);
    }};
    auto result =
        lindley_coupled_sup_distance(base, member, 0.0, horizon, 2000, 7);
    CHECK(result.sup <=
          static_cast<double>(horizon) / static_cast<double>(n) +
              3.0 * result.sup_stderr);
    CHECK(result.sup < previous);
    previous = result.sup;
  }
}

TEST_CASE("one-step coupling never expands the gap between starts") {
  std::mt19937_64 rng(101);
  LindleySpec spec{[](double u) { return 2.0 * u - 1.4; }};
  double xa = 3.0, xb = 0.5;
  for (int step = 0; step < 2000; ++step) {
    double gap = std::abs(xa - xb);
    double u = uniform01(rng);
    double next_a = std::max(xa + spec.increment(u), 0.0);
    double next_b = std::max(xb + spec.increment(u), 0.0);
    CHECK(std::abs(next_a - next_b) <= gap + 1e-15);
    xa = next_a;
    xb = next_b;
  }
}

TEST_CASE("stationary sampling handles the deterministic walk") {
  LindleySpec det{[](double) { return -1.0; }};
  auto sample = lindley_stationary_sample(det, 500, 5);
  REQUIRE(sample.dist.atoms().size() == 1);
  CHECK(sample.dist.atoms()[0].first == 0.0);
  CHECK(sample.barrier > 0.0);
}

TEST_CASE("stationary sampling matches the ruin probability") {
  // up 1 with probability 1/4, down 1 otherwise: P(max >= 1) = 1/3
  LindleySpec walk{[](double u) { return u < 0.25 ? 1.0 : -1.0; }};
  const std::size_t samples = 20000;
  auto sample = lindley_stationary_sample(walk, samples, 11);
  double above = 0.0;
  for (const auto& [loc, mass] : sample.dist.atoms()) {
    if (loc >= 1.0) above += mass;
  }
  double p = 1.0 / 3.0;
  double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  CHECK(std::abs(above - p) < 3.0 * sigma);
}

TEST_CASE("stationary sampling is seed-stable in the Kolmogorov metric") {
  LindleySpec walk{[](double u) { return u - 0.75; }};
  const std::size_t samples = 20000;
  auto a = lindley_stationary_sample(walk, samples, 1);
  auto b = lindley_stationary_sample(walk, samples, 2);
  // two-sample Kolmogorov distance bounded via DKW on each empirical CDF
  double ks = 0.0;
  double cdf_a = 0.0, cdf_b = 0.0;
  std::size_t i = 0, j = 0;
  const auto& atoms_a = a.dist.atoms();
  const auto& atoms_b = b.dist.atoms();
  while (i < atoms_a.size() || j < atoms_b.size()) {
    double x;
    if (j == atoms_b.size() ||
        (i < atoms_a.size() && atoms_a[i].first <= atoms_b[j].first)) {
      x = atoms_a[i].first;
    } else {
      x = atoms_b[j].first;
    }
    while (i < atoms_a.size() && atoms_a[i].first == x) cdf_a += atoms_a[i++].second;
    while (j < atoms_b.size() && atoms_b[j].first == x) cdf_b += atoms_b[j++].second;
    ks = std::max(ks, std::abs(cdf_a - cdf_b));
  }
  CHECK(ks < 2.0 * std::sqrt(std::log(200.0) / (2.0 * static_cast<double>(samples))));
}

TEST_CASE("drift check rejects non-negative drift") {
  LindleySpec bad{[](double u) { return u - 0.4; }};
  CHECK_FALSE(bad.drift_ok(3));
  CHECK_THROWS_AS(lindley_stationary_sample(bad, 500, 3), PreconditionError);
}

TEST_CASE("deterministic affine maps meet the contraction bound with equality") {
  IfsSpec spec;
  spec.contraction_ratio = 0.5;
  spec.sample_map = [](std::mt19937_64&) {
    return std::function<double(double)>([](double v) { return 0.5 * v + 1.0; });
  };
  for (std::size_t k : {1, 5, 10}) {
    auto result = ifs_backward(spec, k, 0.0, 200, 3);
    double beta = 2.0 * (1.0 - std::ldexp(1.0, -static_cast<int>(k)));
    for (double v : result.samples) CHECK(v == beta);
    CHECK(std::abs(std::abs(2.0 - beta) - result.tail_bound) < 1e-15);
  }

  auto zero_depth = ifs_backward(spec, 0, 0.7, 100, 3);
  for (double v : zero_depth.samples) CHECK(v == 0.7);
  CHECK(std::abs(zero_depth.tail_bound - zero_depth.mean_displacement / 0.5) < 1e-15);
}

TEST_CASE("random affine family satisfies the contraction and tail bounds") {
  IfsSpec spec;
  spec.contraction_ratio = 0.5;
  spec.sample_map = [](std::mt19937_64& rng) {
    double slope = uniform01(rng);  // mean 1/2
    double offset = uniform01(rng);
    return std::function<double(double)>(
        [slope, offset](double v) { return slope * v + offset; });
  };

  auto [mean_gap, se_gap] = ifs_contraction_estimate(spec, 0.0, 2.0, 20000, 13);
  CHECK(mean_gap <= 0.5 * 2.0 + 3.0 * se_gap);

  const std::size_t samples = 20000;
  auto deep = ifs_backward(spec, 40, 0.0, samples, 17);
  for (std::size_t k : {5, 10, 20}) {
    auto shallow = ifs_backward(spec, k, 0.0, samples, 17);
    double mean_deep = 0.0, mean_shallow = 0.0;
    for (double v : deep.samples) mean_deep += v;
    for (double v : shallow.samples) mean_shallow += v;
    mean_deep /= static_cast<double>(samples);
    mean_shallow /= static_cast<double>(samples);
    // 3 sigma on each mean plus the contraction tail
    CHECK(std::abs(mean_deep - mean_shallow) <
          shallow.tail_bound + deep.tail_bound + 0.02);
  }
}

TEST_CASE("birth-death kernel rows") {
  CountableKernel k = birth_death_kernel(1.0 / 3.0);
  ProbDist row0 = k.row(0);
  CHECK(std::abs(row0.mass_at(0) - 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(row0.mass_at(1) - 1.0 / 3.0) < 1e-15);
  for (StateIndex x = 1; x <= 10; ++x) {
    ProbDist row = k.row(x);
    CHECK(std::abs(row.mass_at(x - 1) - 2.0 / 3.0) < 1e-15);
    CHECK(std::abs(row.mass_at(x + 1) - 1.0 / 3.0) < 1e-15);
    CHECK(*k.support_bound(x) == x + 1);
  }
  CHECK_THROWS_AS(birth_death_kernel(0.5), PreconditionError);
  CHECK_THROWS_AS(birth_death_kernel(0.0), PreconditionError);
}

TEST_CASE("mm1 generators validate and extend") {
  RateMatrix q = mm1_rate_matrix(1.0, 2.0, 10);
  CHECK(validate_rate_matrix(q, 1e-12).ok());
  CHECK(q.dimension() == 10);
  CHECK(q.at(0, 1) == 1.0);
  CHECK(q.at(3, 2) == 2.0);
  CHECK(q.at(9, 9) == -2.0);  // no departure upward at the boundary

  RateMatrix embedded = mm1_rate_matrix(1.0, 2.0, 4, 8);
  CHECK(embedded.dimension() == 8);
  CHECK(validate_rate_matrix(embedded, 1e-12).ok());
  CHECK(embedded.at(6, 0) == 1.0);
}
