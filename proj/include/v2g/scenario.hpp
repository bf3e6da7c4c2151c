#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "v2g/auction.hpp"
#include "v2g/micro.hpp"

// Randomized market instances. All quantities are drawn uniformly from
// configured intervals with a fixed draw order (aggregators in id order:
// reservation price, PHEV count, then per-PHEV reserve miles / eta /
// upsilon; then buyers in id order: bid, demand), so an instance is fully
// determined by (config, seed) on any platform. PHEV capacities come from
// the battery range left after the owner's reserve, converted from miles
// to MWh.

namespace v2g::scenario {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct IntInterval {
  int lo = 0;
  int hi = 0;
};

struct ScenarioConfig {
  int n_aggregators = 5;
  int n_buyers = 5;
  IntInterval phevs_per_aggregator{500, 1000};
  Interval reserve_miles{30.0, 100.0};
  double battery_miles = 250.0;
  double kwh_per_100_miles = 22.0;
  Interval seller_reservation{10.0, 50.0};  // $/MWh
  Interval buyer_bid{15.0, 60.0};           // $/MWh
  Interval buyer_demand{20.0, 60.0};        // MWh
  double gamma = 0.91;
  Interval eta{10.0, 50.0};
  Interval upsilon{1000.0, 2000.0};
  micro::CostModel cost_model = micro::CostModel::Quadratic;
  std::uint64_t seed = 1;
};

struct Instance {
  std::vector<auction::BuyBid> buyers;
  std::vector<micro::AggregatorState> aggregators;
};

// miles * 22 kWh / 100 miles, in MWh. Throws on negative miles.
double miles_to_mwh(double miles, double kwh_per_100_miles = 22.0);

Instance generate(const ScenarioConfig& config);

// Stateless seed mixer for deriving per-run streams from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point,
                          std::uint64_t run);

// Flat key-value config files: `key = value [value ...]`, '#' comments,
// intervals as two values. Duplicate keys are an error.
using KeyValues = std::map<std::string, std::vector<std::string>>;
KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values_file(const std::string& path);

// Build a config from parsed keys, erasing the ones consumed; missing
// keys keep their defaults. Callers that own the whole file should then
// reject leftovers.
ScenarioConfig config_from_keys(KeyValues& kv);

// Convenience: read, parse, and reject unknown keys.
ScenarioConfig load_config(const std::string& path);

}  // namespace v2g::scenario
