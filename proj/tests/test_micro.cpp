#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "v2g/micro.hpp"

using namespace v2g::micro;

TEST_CASE("announce_price scales by the commission rate") {
  CHECK(announce_price(0.91, 22.5) == doctest::Approx(20.475));
  CHECK(announce_price(0.5, 0.0) == 0.0);
  CHECK(announce_price(0.91, 100.0) == doctest::Approx(91.0));
  CHECK_THROWS_AS(announce_price(0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(announce_price(1.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(announce_price(1.5, 10.0), std::invalid_argument);
}

TEST_CASE("linear best response is bang-bang") {
  CHECK(best_response_linear(20.475, 10.0, 2.0) == 2.0);
  CHECK(best_response_linear(20.475, 30.0, 2.0) == 0.0);
  // Indifference sells nothing.
  CHECK(best_response_linear(15.0, 15.0, 2.0) == 0.0);
}

TEST_CASE("quadratic best response clamps to [0, a_max]") {
  CHECK(best_response_quadratic(20.0, 10.0, 2.0, 10.0) ==
        doctest::Approx(2.5));
  CHECK(best_response_quadratic(20.0, 10.0, 2.0, 1.0) == 1.0);
  CHECK(best_response_quadratic(5.0, 10.0, 2.0, 10.0) == 0.0);
  CHECK_THROWS_AS(best_response_quadratic(20.0, 10.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(best_response_quadratic(20.0, 10.0, -1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("phev_utility evaluates both cost models") {
  const CostSpec linear{CostModel::Linear, 10.0, 0.0};
  CHECK(phev_utility(linear, 20.475, 2.0) == doctest::Approx(20.95));
  CHECK(phev_utility(linear, 20.475, 0.0) == 0.0);
  const CostSpec quad{CostModel::Quadratic, 10.0, 2.0};
  CHECK(phev_utility(quad, 20.0, 2.5) == doctest::Approx(12.5));
  CHECK(phev_utility(quad, 20.0, 0.0) == 0.0);
}

TEST_CASE("aggregate_supply sums proposals") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  CHECK(aggregate_supply(a) == 6.0);
  CHECK(aggregate_supply({}) == 0.0);
  const std::vector<double> b{0.033, 0.0484};
  CHECK(aggregate_supply(b) == doctest::Approx(0.0814));
}

TEST_CASE("allocate_to_phevs splits proportionally and conserves") {
  const std::vector<double> symmetric{2.0, 2.0};
  CHECK(allocate_to_phevs(symmetric, 2.0) == std::vector<double>{1.0, 1.0});
  const std::vector<double> uneven{3.0, 1.0};
  const auto q = allocate_to_phevs(uneven, 2.0);
  CHECK(q[0] == doctest::Approx(1.5));
  CHECK(q[1] == doctest::Approx(0.5));
  CHECK(allocate_to_phevs(symmetric, 0.0) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("allocate_to_phevs rejects infeasible requests") {
  const std::vector<double> a{1.0, 1.0};
  CHECK_THROWS_AS(allocate_to_phevs(a, 3.0), std::invalid_argument);
  const std::vector<double> zeros{0.0, 0.0};
  CHECK_THROWS_AS(allocate_to_phevs(zeros, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(allocate_to_phevs(a, -1.0), std::invalid_argument);
}

namespace {

double grid_max_utility(const CostSpec& cost, double p_n, double a_max) {
  double best = 0.0;
  const int points = 10000;
  for (int i = 0; i <= points; ++i) {
    const double a = a_max * static_cast<double>(i) / points;
    best = std::max(best, phev_utility(cost, p_n, a));
  }
  return best;
}

}  // namespace

TEST_CASE("best responses attain the grid-oracle optimum") {
  std::mt19937_64 rng(101);
  auto unif = [&](double lo, double hi) {
    return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const double p = unif(0.0, 60.0);
    const double eta = unif(0.0, 50.0);
    const double a_max = unif(0.0, 0.05);

    const CostSpec lin{CostModel::Linear, eta, 0.0};
    const double a_lin = best_response_linear(p, eta, a_max);
    CHECK(phev_utility(lin, p, a_lin) >=
          grid_max_utility(lin, p, a_max) - 1e-9);

    const double ups = unif(500.0, 2500.0);
    const CostSpec quad{CostModel::Quadratic, eta, ups};
    const double a_quad = best_response_quadratic(p, eta, ups, a_max);
    CHECK(phev_utility(quad, p, a_quad) >=
          grid_max_utility(quad, p, a_max) - 1e-9);
  }
}

TEST_CASE("quadratic best response is monotone in its parameters") {
  std::mt19937_64 rng(103);
  auto unif = [&](double lo, double hi) {
    return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const double p = unif(0.0, 60.0);
    const double eta = unif(0.0, 50.0);
    const double ups = unif(500.0, 2500.0);
    const double a_max = unif(0.0, 0.05);
    const double base = best_response_quadratic(p, eta, ups, a_max);
    CHECK(best_response_quadratic(p + 1.0, eta, ups, a_max) >= base);
    CHECK(best_response_quadratic(p, eta + 1.0, ups, a_max) <= base);
    CHECK(best_response_quadratic(p, eta, ups + 100.0, a_max) <= base);
  }
}

TEST_CASE("linear best responses partition the fleet") {
  // Under linear cost every PHEV is at 0 or a_max, so the aggregate is
  // the sum of capacities over the participating set.
  std::mt19937_64 rng(107);
  auto unif = [&](double lo, double hi) {
    return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
  };
  const double p = 25.0;
  double participating = 0.0;
  std::vector<double> responses;
  for (int i = 0; i < 100; ++i) {
    const double eta = unif(0.0, 50.0);
    const double a_max = unif(0.0, 0.05);
    const double a = best_response_linear(p, eta, a_max);
    CHECK((a == 0.0 || a == a_max));
    if (eta < p) participating += a_max;
    responses.push_back(a);
  }
  CHECK(aggregate_supply(responses) == doctest::Approx(participating));
}

TEST_CASE("proportional allocation conserves and keeps ratios") {
  std::mt19937_64 rng(109);
  auto unif = [&](double lo, double hi) {
    return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> proposals;
    double tot = 0.0;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      proposals.push_back(unif(0.0, 1.0));
      tot += proposals.back();
    }
    const double sold = unif(0.0, 1.0) * tot;
    const auto q = allocate_to_phevs(proposals, sold);
    double sum = 0.0;
    for (double v : q) sum += v;
    CHECK(sum == doctest::Approx(sold).epsilon(1e-12));
    for (int i = 0; i < n; ++i) {
      CHECK(q[static_cast<std::size_t>(i)] <=
            proposals[static_cast<std::size_t>(i)] + 1e-12);
      if (q[static_cast<std::size_t>(i)] > 0.0 && q[0] > 0.0) {
        CHECK(q[static_cast<std::size_t>(i)] / q[0] ==
              doctest::Approx(proposals[static_cast<std::size_t>(i)] /
                              proposals[0])
                  .epsilon(1e-9));
      }
    }
  }
}
