#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "v2g/sweep.hpp"

using namespace v2g::sweep;

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.variable = Variable::NumAggregators;
  spec.values = {2, 3, 4};
  spec.runs_per_point = 5;
  spec.base.n_buyers = 5;
  spec.base.phevs_per_aggregator = {20, 40};
  spec.base.seed = 11;
  return spec;
}

}  // namespace

TEST_CASE("sweep emits one row per value and baseline") {
  const auto rows = run_sweep(small_spec());
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].value == 2);
  CHECK(rows[0].baseline == "two_layer");
  CHECK(rows[1].baseline == "greedy");
  for (const auto& row : rows) {
    CHECK(row.runs == 5);
    CHECK(row.mean_iterations >= 1.0);
  }
}

TEST_CASE("sweep results are deterministic") {
  const auto a = run_sweep(small_spec());
  const auto b = run_sweep(small_spec());
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mean_utility == b[i].mean_utility);
    CHECK(a[i].mean_price == b[i].mean_price);
    CHECK(a[i].mean_iterations == b[i].mean_iterations);
  }
}

TEST_CASE("single run per point has zero std deviations") {
  auto spec = small_spec();
  spec.runs_per_point = 1;
  for (const auto& row : run_sweep(spec)) {
    CHECK(row.std_utility == 0.0);
    CHECK(row.std_price == 0.0);
    CHECK(row.std_iterations == 0.0);
  }
}

TEST_CASE("greedy rows never iterate more than once") {
  for (const auto& row : run_sweep(small_spec())) {
    if (row.baseline == "greedy") CHECK(row.mean_iterations == 1.0);
  }
}

TEST_CASE("invalid sweep specs are rejected") {
  SweepSpec spec = small_spec();
  spec.values.clear();
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  spec = small_spec();
  spec.runs_per_point = 0;
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  spec = small_spec();
  spec.two_layer = false;
  spec.greedy = false;
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
}

TEST_CASE("sweep spec files parse scenario and sweep keys") {
  const std::string path = "test_sweep_spec.cfg";
  {
    std::ofstream out(path);
    out << "sweep_variable = n_buyers\n"
           "sweep_values = 3 5 7\n"
           "runs_per_point = 2\n"
           "baselines = greedy\n"
           "t_max = 10\n"
           "xi = 0.001\n"
           "n_aggregators = 4\n"
           "phevs_per_aggregator = 10 20\n"
           "seed = 5\n";
  }
  const SweepSpec spec = load_sweep_spec(path);
  CHECK(spec.variable == Variable::NumBuyers);
  CHECK(spec.values == std::vector<int>{3, 5, 7});
  CHECK(spec.runs_per_point == 2);
  CHECK(!spec.two_layer);
  CHECK(spec.greedy);
  CHECK(spec.mech.t_max == 10);
  CHECK(spec.mech.xi == 0.001);
  CHECK(spec.base.n_aggregators == 4);
  CHECK(spec.base.seed == 5);

  {
    std::ofstream out(path);
    out << "runs_per_point = 2\n";  // missing sweep_values
  }
  CHECK_THROWS_AS(load_sweep_spec(path), std::invalid_argument);
  {
    std::ofstream out(path);
    out << "sweep_values = 2\nbogus_key = 1\n";
  }
  CHECK_THROWS_AS(load_sweep_spec(path), std::invalid_argument);
}
