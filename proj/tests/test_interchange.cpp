#include <doctest.h>

#include <cmath>
#include <random>

#include "markov/interchange.hpp"
#include "markov/stationary.hpp"
#include "test_util.hpp"

using namespace markov;

TEST_CASE("sup_tv_horizon on hand fixtures") {
  StochasticMatrix m = test::lazy_two_state();
  auto same = sup_tv_horizon(m, m, 0, 10);
  CHECK(same.max_tv == 0.0);
  CHECK(same.argmax == 0);
  for (double v : same.profile) CHECK(v == 0.0);

  auto far = sup_tv_horizon(test::permutation_two_state(),
                            StochasticMatrix::identity(2), 0, 1);
  CHECK(far.max_tv == 2.0);
  CHECK(far.argmax == 1);

  auto lazy = sup_tv_horizon(m, test::symmetric_two_state(), 0, 2);
  REQUIRE(lazy.profile.size() == 3);
  CHECK(lazy.profile[0] == 0.0);
  CHECK(lazy.profile[1] == 0.0);
  CHECK(std::abs(lazy.profile[2] - 0.25) < 1e-15);
  CHECK(lazy.argmax == 2);

  CHECK_THROWS_AS(sup_tv_horizon(m, StochasticMatrix::identity(3), 0, 5),
                  DimensionError);
}

TEST_CASE("sup_tv profiles satisfy the triangle inequality pointwise") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    StochasticMatrix a = test::random_chain(rng, 5);
    StochasticMatrix b = test::random_chain(rng, 5);
    StochasticMatrix c = test::random_chain(rng, 5);
    auto ab = sup_tv_horizon(a, b, 0, 30);
    auto bc = sup_tv_horizon(b, c, 0, 30);
    auto ac = sup_tv_horizon(a, c, 0, 30);
    for (std::size_t m = 0; m <= 30; ++m) {
      CHECK(ac.profile[m] <= ab.profile[m] + bc.profile[m] + 1e-13);
    }
  }
}

TEST_CASE("certified bound collapses for identical chains") {
  StochasticMatrix sym = test::symmetric_two_state();
  ProbDist pi = gth(sym);
  auto report = certified_uniform_bound(sym, sym, pi, pi, 0, 1);
  CHECK(report.term_transient == 0.0);
  CHECK(report.term_stationary == 0.0);
  CHECK(report.term_mixing == 0.0);
  CHECK(report.total == 0.0);

  StochasticMatrix lazy = test::lazy_two_state();
  ProbDist pi_lazy = gth(lazy);
  for (std::size_t t : {0, 1, 3, 8}) {
    auto r = certified_uniform_bound(lazy, lazy, pi_lazy, pi_lazy, 0, t);
    double expect = 2.0 * tv_distance(marginal(lazy, 0, t), pi_lazy);
    CHECK(std::abs(r.total - expect) < 1e-14);
    CHECK(r.total == r.term_transient + r.term_stationary + r.term_mixing);
  }
}

TEST_CASE("certified bound demands stationary inputs") {
  StochasticMatrix lazy = test::lazy_two_state();
  ProbDist pi = gth(lazy);
  ProbDist wrong = ProbDist::delta(0);
  CHECK_THROWS_AS(certified_uniform_bound(lazy, lazy, wrong, pi, 0, 5),
                  PreconditionError);
  CHECK_THROWS_AS(certified_uniform_bound(lazy, lazy, pi, wrong, 0, 5),
                  PreconditionError);
}

TEST_CASE("certified bound dominates the empirical sup on random pairs") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    StochasticMatrix a = test::random_chain(rng, 5);
    StochasticMatrix b = test::random_chain(rng, 5);
    ProbDist pi_a = gth(a);
    ProbDist pi_b = gth(b);
    auto sup = sup_tv_horizon(a, b, 0, 2000);
    for (std::size_t t : {10, 50}) {
      auto report = certified_uniform_bound(a, b, pi_a, pi_b, 0, t);
      CHECK(report.total >= sup.max_tv);
    }
  }
}

TEST_CASE("monotone profile matches the hand-computed sequence") {
  StochasticMatrix lazy = test::lazy_two_state();
  ProbDist pi = ProbDist::from_pairs({{0, 1.0 / 3.0}, {1, 2.0 / 3.0}});
  auto profile = monotone_tv_profile(lazy, pi, 0, 3);
  REQUIRE(profile.size() == 4);
  CHECK(std::abs(profile[0] - 4.0 / 3.0) < 1e-14);
  CHECK(std::abs(profile[1] - 1.0 / 3.0) < 1e-14);
  CHECK(std::abs(profile[2] - 1.0 / 12.0) < 1e-14);
  CHECK(std::abs(profile[3] - 1.0 / 48.0) < 1e-14);
}

TEST_CASE("monotone profile handles periodic chains and fixed starts") {
  // periodic: the distance to the stationary law is constant, never rising
  ProbDist pi = ProbDist::from_pairs({{0, 0.5}, {1, 0.5}});
  auto flat = monotone_tv_profile(test::permutation_two_state(), pi, 0, 20);
  for (double v : flat) CHECK(std::abs(v - 1.0) < 1e-14);

  auto zero = monotone_tv_profile(StochasticMatrix::identity(1),
                                  ProbDist::delta(0), 0, 5);
  for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("monotone profile is non-increasing on random chains") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    StochasticMatrix m = test::random_chain(rng, 4 + rng() % 5);
    ProbDist pi = gth(m);
    auto profile = monotone_tv_profile(m, pi, 0, 200);
    for (std::size_t i = 1; i < profile.size(); ++i) {
      CHECK(profile[i] <= profile[i - 1] + kMonotoneSlack);
    }
  }
}

TEST_CASE("weighted bound reduces to the plain bound at w = 1, b = 1") {
  StochasticMatrix lazy = test::lazy_two_state();
  ProbDist pi = gth(lazy);
  auto base = certified_uniform_bound(lazy, lazy, pi, pi, 0, 5);
  double weighted =
      weighted_uniform_bound(lazy, lazy, pi, pi, 0, 5, WeightFunction::ones(), 1.0);
  CHECK(std::abs(weighted - base.total) < 1e-14);
}

TEST_CASE("weighted bound preconditions") {
  StochasticMatrix lazy = test::lazy_two_state();
  ProbDist pi = gth(lazy);
  CHECK_THROWS_AS(weighted_uniform_bound(lazy, lazy, pi, pi, 0, 5,
                                         WeightFunction::ones(), 0.5),
                  PreconditionError);

  // transient start state has zero stationary mass
  StochasticMatrix with_transient = StochasticMatrix::from_dense(
      {{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {1.0, 0.0, 0.0}});
  ProbDist pi3 = gth(with_transient);
  CHECK_THROWS_AS(weighted_uniform_bound(with_transient, with_transient, pi3, pi3,
                                         2, 5, WeightFunction::ones(), 2.0),
                  PreconditionError);
}

TEST_CASE("weighted bound dominates the weighted sup empirically") {
  std::mt19937_64 rng(53);
  WeightFunction w([](StateIndex y) { return 1.0 + static_cast<double>(y); });
  for (int trial = 0; trial < 10; ++trial) {
    StochasticMatrix a = test::random_chain(rng, 4);
    StochasticMatrix b = test::random_chain(rng, 4);
    ProbDist pi_a = gth(a);
    ProbDist pi_b = gth(b);
    double bound = weighted_uniform_bound(a, b, pi_a, pi_b, 0, 40, w, 2.0);
    ProbDist da = ProbDist::delta(0), db = ProbDist::delta(0);
    double sup = 0.0;
    for (int m = 0; m <= 500; ++m) {
      sup = std::max(sup, weighted_tv_distance(da, db, w));
      da = propagate(da, a);
      db = propagate(db, b);
    }
    CHECK(bound >= sup);
  }
}

TEST_CASE("diagonal probe follows the schedule") {
  StochasticMatrix lazy = test::lazy_two_state();
  ProbDist pi = gth(lazy);
  std::vector<std::pair<std::size_t, StochasticMatrix>> family;
  std::vector<std::size_t> schedule;
  for (std::size_t n : {2, 4, 8, 16, 32}) {
    family.emplace_back(n, lazy);
    schedule.push_back(n);
  }
  auto rows = diagonal_probe(family, schedule, 0, pi);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].tv < rows[i - 1].tv);
  CHECK(rows.back().tv < 1e-3);
}

TEST_CASE("diagonal probe exposes non-convergent schedules on growing cycles") {
  // cycle of length n+2, probed one step short of a full revolution: the
  // marginal lands away from the start for every n even though each fixed
  // power converges as the family grows
  std::vector<std::pair<std::size_t, StochasticMatrix>> family;
  std::vector<std::size_t> schedule;
  for (std::size_t n : {3, 5, 9, 17}) {
    std::size_t size = n + 2;
    std::vector<StochasticMatrix::Row> rows(size);
    for (StateIndex s = 0; s < size; ++s) {
      rows[s].push_back({(s + 1) % size, 1.0});
    }
    family.emplace_back(n, StochasticMatrix(size, std::move(rows)));
    schedule.push_back(n + 1);
  }
  auto rows = diagonal_probe(family, schedule, 0, ProbDist::delta(0));
  for (const auto& row : rows) CHECK(row.tv == 2.0);
}

TEST_CASE("diagonal probe rejects constant schedules") {
  StochasticMatrix lazy = test::lazy_two_state();
  std::vector<std::pair<std::size_t, StochasticMatrix>> family{{1, lazy}, {2, lazy}};
  CHECK_THROWS_AS(diagonal_probe(family, {5, 5}, 0, gth(lazy)), PreconditionError);
  CHECK_THROWS_AS(diagonal_probe(family, {5, 4}, 0, gth(lazy)), PreconditionError);
  CHECK_THROWS_AS(diagonal_probe(family, {5}, 0, gth(lazy)), DimensionError);
}
