#pragma once

#include <string>
#include <vector>

#include "v2g/mechanism.hpp"
#include "v2g/scenario.hpp"

// Seeded parameter sweeps over the number of aggregators or buyers,
// comparing the iterative two-layer mechanism against the greedy
// baseline. Each (swept value, run index) pair gets its own instance
// seed derived from the base seed, and both baselines share the
// instance, so rows are reproducible and comparable.

namespace v2g::sweep {

enum class Variable { NumAggregators, NumBuyers };

struct SweepSpec {
  Variable variable = Variable::NumAggregators;
  std::vector<int> values;
  int runs_per_point = 1;
  scenario::ScenarioConfig base;
  mechanism::MechanismConfig mech;
  bool two_layer = true;
  bool greedy = true;
};

struct SweepRow {
  int value = 0;
  std::string baseline;  // "two_layer" or "greedy"
  int runs = 0;
  double mean_utility = 0.0;  // mean per-aggregator utility, then over runs
  double std_utility = 0.0;
  double mean_price = 0.0;  // over runs that produced a price
  double std_price = 0.0;
  int priced_runs = 0;
  double mean_iterations = 0.0;
  double std_iterations = 0.0;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Sweep spec files share the scenario key-value format plus:
//   sweep_variable = n_aggregators | n_buyers
//   sweep_values = v1 v2 ...
//   runs_per_point = R
//   baselines = two_layer greedy
//   t_max = T, xi = X
SweepSpec load_sweep_spec(const std::string& path);

std::string to_string(Variable v);

}  // namespace v2g::sweep
