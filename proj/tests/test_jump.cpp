#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "markov/fixtures.hpp"
#include "markov/jump.hpp"
#include "markov/stationary.hpp"
#include "test_util.hpp"

using namespace markov;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RateMatrix random_generator(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double out = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      rows[i][j] = 0.1 + uniform01(rng);
      out += rows[i][j];
    }
    rows[i][i] = -out;
  }
  return RateMatrix::from_dense(rows);
}

}  // namespace

TEST_CASE("rate matrix validation catches each condition") {
  CHECK(validate_rate_matrix(RateMatrix::from_dense({{-1.0, 1.0}, {1.0, -1.0}}),
                             1e-12)
            .ok());

  auto drift = validate_rate_matrix(
      RateMatrix::from_dense({{-1.0, 1.1}, {1.0, -1.0}}), 1e-9);
  REQUIRE(drift.rows.size() == 1);
  CHECK(drift.rows[0].row == 0);
  CHECK(std::abs(drift.rows[0].row_sum - 0.1) < 1e-12);

  auto negative = validate_rate_matrix(
      RateMatrix::from_dense({{0.5, -0.5}, {1.0, -1.0}}), 1e-9);
  REQUIRE(negative.rows.size() == 1);
  CHECK(negative.rows[0].min_off_diagonal == -0.5);
}

TEST_CASE("embedded chain extracts holding rates and jump rows") {
  JumpChain chain = embedded_chain(RateMatrix::from_dense({{-2.0, 2.0}, {1.0, -1.0}}));
  CHECK(chain.holding_rates[0] == 2.0);
  CHECK(chain.holding_rates[1] == 1.0);
  CHECK(chain.jump_matrix.at(0, 1) == 1.0);
  CHECK(chain.jump_matrix.at(1, 0) == 1.0);
  CHECK(chain.jump_matrix.at(0, 0) == 0.0);

  JumpChain frozen = embedded_chain(RateMatrix::from_dense({{0.0, 0.0}, {0.0, 0.0}}));
  CHECK(frozen.holding_rates[0] == 0.0);
  CHECK(frozen.jump_matrix.at(0, 0) == 1.0);
  CHECK(frozen.jump_matrix.at(1, 1) == 1.0);

  JumpChain mixed = embedded_chain(RateMatrix::from_dense(
      {{-1.0, 0.5, 0.5}, {0.0, 0.0, 0.0}, {1.0, 0.0, -1.0}}));
  CHECK(mixed.holding_rates[0] == 1.0);
  CHECK(mixed.holding_rates[1] == 0.0);
  CHECK(mixed.holding_rates[2] == 1.0);
  CHECK(mixed.jump_matrix.at(0, 1) == 0.5);
  CHECK(mixed.jump_matrix.at(1, 1) == 1.0);
  CHECK(mixed.jump_matrix.at(2, 0) == 1.0);
}

TEST_CASE("embedded chain round trip reproduces the generator") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    RateMatrix q = random_generator(rng, 5);
    JumpChain chain = embedded_chain(q);
    for (StateIndex x = 0; x < 5; ++x) {
      for (StateIndex y = 0; y < 5; ++y) {
        double expect = q.at(x, y);
        double got = x == y ? -chain.holding_rates[x]
                            : chain.holding_rates[x] * chain.jump_matrix.at(x, y);
        CHECK(std::abs(expect - got) < 1e-14);
      }
    }
  }
}

TEST_CASE("transient law matches the two-state closed form") {
  RateMatrix q = RateMatrix::from_dense({{-1.0, 1.0}, {1.0, -1.0}});
  for (double t : {0.5, 1.0, 3.0}) {
    ProbDist d = transient(q, 0, t, 1e-12);
    double expect = 0.5 * (1.0 + std::exp(-2.0 * t));
    CHECK(std::abs(d.mass_at(0) - expect) < 1e-11);
  }
  CHECK(transient(q, 1, 0.0, 1e-10) == ProbDist::delta(1));
  CHECK(transient(RateMatrix::from_dense({{0.0, 0.0}, {0.0, 0.0}}), 1, 7.0, 1e-10) ==
        ProbDist::delta(1));
}

TEST_CASE("transient satisfies the semigroup property") {
  std::mt19937_64 rng(73);
  const double eps = 1e-10;
  for (int trial = 0; trial < 5; ++trial) {
    RateMatrix q = random_generator(rng, 4);
    double s = 0.4 + uniform01(rng);
    double t = 0.2 + uniform01(rng);
    ProbDist direct = transient(q, 0, s + t, eps);
    ProbDist first = transient(q, 0, s, eps);
    std::vector<double> composed(4, 0.0);
    for (const auto& [y, mass] : first.support()) {
      ProbDist second = transient(q, y, t, eps);
      for (const auto& [z, mass2] : second.support()) composed[z] += mass * mass2;
    }
    CHECK(tv_distance(direct, ProbDist::from_dense(composed, 1e-6)) < 3.0 * eps + 1e-12);
  }
}

TEST_CASE("the stationary law is a fixed point of the transient flow") {
  RateMatrix q = mm1_rate_matrix(1.0, 2.0, 12);
  ProbDist pi = ctmc_stationary(q);
  const double eps = 1e-10;
  for (double t : {0.5, 5.0}) {
    std::vector<double> pushed(q.dimension(), 0.0);
    for (const auto& [y, mass] : pi.support()) {
      ProbDist row = transient(q, y, t, eps);
      for (const auto& [z, mass2] : row.support()) pushed[z] += mass * mass2;
    }
    CHECK(tv_distance(pi, ProbDist::from_dense(pushed, 1e-6)) < 3.0 * eps + 1e-12);
  }
}

TEST_CASE("ctmc certified bound collapses for identical generators") {
  RateMatrix q = RateMatrix::from_dense({{-1.0, 1.0}, {1.0, -1.0}});
  ProbDist pi = ctmc_stationary(q);
  const double eps = 1e-11;
  auto report = ctmc_certified_uniform_bound(q, q, pi, pi, 0, 4, eps);
  // only the mixing term survives: 2 TV(skeleton^4(0,.), pi)
  ProbDist skel4 = transient(q, 0, 4.0, eps);
  CHECK(std::abs(report.skeleton.total - 2.0 * tv_distance(skel4, pi)) < 1e-7);
  CHECK(report.truncation_slack == 4.0 * eps * 2.0);
  CHECK(report.total() >= report.skeleton.total);
}

TEST_CASE("ctmc certified bound dominates the transient sup on a rate pair") {
  RateMatrix q_a = RateMatrix::from_dense({{-1.0, 1.0}, {1.0, -1.0}});
  RateMatrix q_b = RateMatrix::from_dense({{-1.1, 1.1}, {1.1, -1.1}});
  ProbDist pi_a = ctmc_stationary(q_a);
  ProbDist pi_b = ctmc_stationary(q_b);
  auto report = ctmc_certified_uniform_bound(q_a, q_b, pi_a, pi_b, 0, 10, 1e-11);
  double sup = 0.0;
  for (int i = 0; i <= 200; ++i) {
    double t = 0.1 * i;
    sup = std::max(sup, tv_distance(transient(q_a, 0, t, 1e-12),
                                    transient(q_b, 0, t, 1e-12)));
  }
  CHECK(report.total() >= sup);
  CHECK(sup > 0.03);  // the pair genuinely separates
}

TEST_CASE("ctmc expectations on closed-form fixtures") {
  // leave state 0 at rate 2: expected holding time 1/2
  RateMatrix q = RateMatrix::from_dense({{-2.0, 2.0}, {1.0, -1.0}});
  RewardSpec leave;
  leave.continue_region = {0};
  leave.reward = [](StateIndex y) { return y == 0 ? 1.0 : 0.0; };
  leave.discount_rate = [](StateIndex) { return 0.0; };
  CHECK(std::abs(ctmc_fte(q, leave, 0) - 0.5) < 1e-12);

  // absorbing target reachable at rate 1: expected hitting time 1
  RateMatrix hit = RateMatrix::from_dense({{-1.0, 1.0}, {0.0, 0.0}});
  RewardSpec spec;
  spec.continue_region = {0};
  spec.reward = [](StateIndex) { return 1.0; };
  spec.discount_rate = [](StateIndex) { return 0.0; };
  CHECK(std::abs(ctmc_fte(hit, spec, 0) - 1.0) < 1e-12);

  // pure discounting: integral of exp(-alpha s) over all time
  RewardSpec discounted;
  discounted.continue_region = {0, 1};
  discounted.reward = [](StateIndex) { return 1.0; };
  discounted.discount_rate = [](StateIndex) { return 0.25; };
  CHECK(std::abs(ctmc_fte(q, discounted, 0) - 4.0) < 1e-10);
  CHECK(std::abs(ctmc_fte(q, discounted, 1) - 4.0) < 1e-10);

  // absorbed inside the continue region with positive reward diverges
  RateMatrix frozen = RateMatrix::from_dense({{0.0, 0.0}, {1.0, -1.0}});
  CHECK(ctmc_fte(frozen, spec, 0) == kInf);
}

TEST_CASE("embedded transform agrees with path simulation") {
  // state-dependent rates, rewards, and discounts; exit state 2
  RateMatrix q = RateMatrix::from_dense(
      {{-2.0, 1.5, 0.5}, {1.0, -3.0, 2.0}, {0.5, 0.5, -1.0}});
  std::vector<double> alpha = {0.3, 0.1, 0.0};
  std::vector<double> reward = {2.0, 1.0, 0.0};
  RewardSpec spec;
  spec.continue_region = {0, 1};
  spec.reward = [reward](StateIndex y) { return reward[y]; };
  spec.discount_rate = [alpha](StateIndex y) { return alpha[y]; };
  double solved = ctmc_fte(q, spec, 0);

  JumpChain chain = embedded_chain(q);
  std::mt19937_64 rng(79);
  const std::size_t paths = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < paths; ++i) {
    StateIndex state = 0;
    double discount_exponent = 0.0;
    double value = 0.0;
    while (state != 2) {
      double rate = chain.holding_rates[state];
      double hold = -std::log(1.0 - uniform01(rng)) / rate;
      double a = alpha[state];
      // reward collected over this sojourn, discounted from its start
      if (a > 0.0) {
        value += reward[state] * std::exp(-discount_exponent) *
                 (1.0 - std::exp(-a * hold)) / a;
      } else {
        value += reward[state] * std::exp(-discount_exponent) * hold;
      }
      discount_exponent += a * hold;
      double u = uniform01(rng);
      double acc = 0.0;
      StateIndex next = state;
      for (const auto& e : chain.jump_matrix.row(state)) {
        acc += e.prob;
        if (u < acc) {
          next = e.col;
          break;
        }
      }
      state = next;
    }
    sum += value;
    sumsq += value * value;
  }
  double mean = sum / static_cast<double>(paths);
  double var = std::max(0.0, sumsq / static_cast<double>(paths) - mean * mean);
  double se = std::sqrt(var / static_cast<double>(paths));
  CHECK(std::abs(mean - solved) < 3.0 * se);
  CHECK(se < 0.01);
}
