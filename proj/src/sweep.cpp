#include "v2g/sweep.hpp"

#include <cmath>
#include <stdexcept>

namespace v2g::sweep {

namespace {

struct Accumulator {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  double mean() const {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  double stddev() const {
    if (values.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size()));
  }
};

SweepRow summarize(int value, const std::string& baseline,
                   const Accumulator& utility, const Accumulator& price,
                   const Accumulator& iterations, int runs) {
  SweepRow row;
  row.value = value;
  row.baseline = baseline;
  row.runs = runs;
  row.mean_utility = utility.mean();
  row.std_utility = utility.stddev();
  row.mean_price = price.mean();
  row.std_price = price.stddev();
  row.priced_runs = static_cast<int>(price.values.size());
  row.mean_iterations = iterations.mean();
  row.std_iterations = iterations.stddev();
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.values.empty() || spec.runs_per_point < 1) {
    throw std::invalid_argument("sweep needs values and runs_per_point >= 1");
  }
  if (!spec.two_layer && !spec.greedy) {
    throw std::invalid_argument("sweep needs at least one baseline");
  }

  std::vector<SweepRow> rows;
  for (int value : spec.values) {
    scenario::ScenarioConfig config = spec.base;
    switch (spec.variable) {
      case Variable::NumAggregators:
        config.n_aggregators = value;
        break;
      case Variable::NumBuyers:
        config.n_buyers = value;
        break;
    }

    Accumulator tl_utility, tl_price, tl_iters;
    Accumulator gr_utility, gr_price, gr_iters;
    for (int run = 0; run < spec.runs_per_point; ++run) {
      config.seed = scenario::derive_seed(
          spec.base.seed, static_cast<std::uint64_t>(value),
          static_cast<std::uint64_t>(run));
      const scenario::Instance inst = scenario::generate(config);
      if (spec.two_layer) {
        mechanism::MechanismConfig mech = spec.mech;
        mech.record_phev_detail = false;
        const auto trace =
            mechanism::run_market(inst.buyers, inst.aggregators, mech);
        tl_utility.add(trace.mean_utility_per_aggregator());
        if (trace.has_final_price()) tl_price.add(trace.final_price());
        tl_iters.add(static_cast<double>(trace.iterations.size()));
      }
      if (spec.greedy) {
        const auto trace = mechanism::run_greedy(inst.buyers, inst.aggregators);
        gr_utility.add(trace.mean_utility_per_aggregator());
        if (trace.has_final_price()) gr_price.add(trace.final_price());
        gr_iters.add(static_cast<double>(trace.iterations.size()));
      }
    }
    if (spec.two_layer) {
      rows.push_back(summarize(value, "two_layer", tl_utility, tl_price,
                               tl_iters, spec.runs_per_point));
    }
    if (spec.greedy) {
      rows.push_back(summarize(value, "greedy", gr_utility, gr_price, gr_iters,
                               spec.runs_per_point));
    }
  }
  return rows;
}

SweepSpec load_sweep_spec(const std::string& path) {
  scenario::KeyValues kv = scenario::read_key_values_file(path);
  SweepSpec spec;

  if (auto it = kv.find("sweep_variable"); it != kv.end()) {
    if (it->second.size() != 1) {
      throw std::invalid_argument("sweep_variable expects a single value");
    }
    if (it->second[0] == "n_aggregators") {
      spec.variable = Variable::NumAggregators;
    } else if (it->second[0] == "n_buyers") {
      spec.variable = Variable::NumBuyers;
    } else {
      throw std::invalid_argument(
          "sweep_variable must be n_aggregators or n_buyers");
    }
    kv.erase(it);
  }
  if (auto it = kv.find("sweep_values"); it != kv.end()) {
    for (const std::string& v : it->second) {
      spec.values.push_back(std::stoi(v));
    }
    kv.erase(it);
  } else {
    throw std::invalid_argument("sweep spec requires sweep_values");
  }
  if (auto it = kv.find("runs_per_point"); it != kv.end()) {
    spec.runs_per_point = std::stoi(it->second[0]);
    kv.erase(it);
  }
  if (auto it = kv.find("baselines"); it != kv.end()) {
    spec.two_layer = false;
    spec.greedy = false;
    for (const std::string& v : it->second) {
      if (v == "two_layer") {
        spec.two_layer = true;
      } else if (v == "greedy") {
        spec.greedy = true;
      } else {
        throw std::invalid_argument("unknown baseline '" + v + "'");
      }
    }
    kv.erase(it);
  }
  if (auto it = kv.find("t_max"); it != kv.end()) {
    spec.mech.t_max = std::stoi(it->second[0]);
    kv.erase(it);
  }
  if (auto it = kv.find("xi"); it != kv.end()) {
    spec.mech.xi = std::stod(it->second[0]);
    kv.erase(it);
  }

  spec.base = scenario::config_from_keys(kv);
  if (!kv.empty()) {
    throw std::invalid_argument("unknown sweep key '" + kv.begin()->first +
                                "' in " + path);
  }
  return spec;
}

std::string to_string(Variable v) {
  switch (v) {
    case Variable::NumAggregators:
      return "n_aggregators";
    case Variable::NumBuyers:
      return "n_buyers";
  }
  return "unknown";
}

}  // namespace v2g::sweep
