#include "v2g/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace v2g::scenario {

namespace {

// mt19937_64 is fully specified by the standard; the uniform conversions
// below avoid std::uniform_*_distribution, whose output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(const Interval& iv) {
    const double u =
        static_cast<double>(engine_() >> 11) * 0x1.0p-53;  // [0, 1)
    return iv.lo + u * (iv.hi - iv.lo);
  }

  int uniform_int(const IntInterval& iv) {
    const std::uint64_t span = static_cast<std::uint64_t>(iv.hi - iv.lo) + 1;
    return iv.lo + static_cast<int>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

void validate(const ScenarioConfig& c) {
  if (c.n_aggregators < 1 || c.n_buyers < 1) {
    throw std::invalid_argument("need at least one aggregator and one buyer");
  }
  auto check = [](double lo, double hi, const char* what) {
    if (!(lo <= hi)) {
      throw std::invalid_argument(std::string(what) +
                                  ": interval bounds out of order");
    }
  };
  check(c.phevs_per_aggregator.lo, c.phevs_per_aggregator.hi,
        "phevs_per_aggregator");
  check(c.reserve_miles.lo, c.reserve_miles.hi, "reserve_miles");
  check(c.seller_reservation.lo, c.seller_reservation.hi,
        "seller_reservation");
  check(c.buyer_bid.lo, c.buyer_bid.hi, "buyer_bid");
  check(c.buyer_demand.lo, c.buyer_demand.hi, "buyer_demand");
  check(c.eta.lo, c.eta.hi, "eta");
  check(c.upsilon.lo, c.upsilon.hi, "upsilon");
  if (c.phevs_per_aggregator.lo < 0) {
    throw std::invalid_argument("phevs_per_aggregator must be >= 0");
  }
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in (0, 1)");
  }
  if (c.reserve_miles.hi > c.battery_miles) {
    throw std::invalid_argument("reserve miles cannot exceed battery miles");
  }
  if (c.cost_model == micro::CostModel::Quadratic && !(c.upsilon.lo > 0.0)) {
    throw std::invalid_argument("quadratic cost needs upsilon > 0");
  }
}

}  // namespace

double miles_to_mwh(double miles, double kwh_per_100_miles) {
  if (!(miles >= 0.0)) {
    throw std::invalid_argument("miles must be >= 0");
  }
  return miles * kwh_per_100_miles / 100.0 / 1000.0;
}

Instance generate(const ScenarioConfig& config) {
  validate(config);
  Rng rng(config.seed);
  Instance inst;

  inst.aggregators.resize(static_cast<std::size_t>(config.n_aggregators));
  for (int n = 0; n < config.n_aggregators; ++n) {
    micro::AggregatorState& agg =
        inst.aggregators[static_cast<std::size_t>(n)];
    agg.id = static_cast<std::uint32_t>(n);
    agg.gamma = config.gamma;
    agg.reservation_price = rng.uniform(config.seller_reservation);
    const int n_phevs = rng.uniform_int(config.phevs_per_aggregator);
    agg.phevs.resize(static_cast<std::size_t>(n_phevs));
    for (int i = 0; i < n_phevs; ++i) {
      micro::Phev& phev = agg.phevs[static_cast<std::size_t>(i)];
      phev.id = static_cast<std::uint32_t>(i);
      const double reserve = rng.uniform(config.reserve_miles);
      phev.a_max = miles_to_mwh(config.battery_miles - reserve,
                                config.kwh_per_100_miles);
      phev.cost.model = config.cost_model;
      phev.cost.eta = rng.uniform(config.eta);
      // Drawn for both cost models so an instance's capacities and etas
      // do not depend on the model choice; unused when linear.
      const double upsilon = rng.uniform(config.upsilon);
      phev.cost.upsilon =
          config.cost_model == micro::CostModel::Quadratic ? upsilon : 0.0;
    }
  }

  inst.buyers.resize(static_cast<std::size_t>(config.n_buyers));
  for (int k = 0; k < config.n_buyers; ++k) {
    auction::BuyBid& bid = inst.buyers[static_cast<std::size_t>(k)];
    bid.buyer_id = static_cast<std::uint32_t>(k);
    bid.bid = rng.uniform(config.buyer_bid);
    bid.quantity = rng.uniform(config.buyer_demand);
  }
  return inst;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point,
                          std::uint64_t run) {
  // splitmix64 over a simple combination of the inputs.
  std::uint64_t x = base ^ (point * 0x9e3779b97f4a7c15ULL) ^
                    (run * 0xbf58476d1ce4e5b9ULL);
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string eq;
    if (!(ls >> eq) || eq != "=") {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    std::vector<std::string> values;
    std::string v;
    while (ls >> v) values.push_back(v);
    if (values.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": missing value for key '" + key + "'");
    }
    if (!kv.emplace(key, std::move(values)).second) {
      throw std::invalid_argument("duplicate config key '" + key + "'");
    }
  }
  return kv;
}

KeyValues read_key_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str());
}

namespace {

double take_double(KeyValues& kv, const std::string& key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  if (it->second.size() != 1) {
    throw std::invalid_argument("key '" + key + "' expects a single value");
  }
  const double v = std::stod(it->second[0]);
  kv.erase(it);
  return v;
}

int take_int(KeyValues& kv, const std::string& key, int fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  if (it->second.size() != 1) {
    throw std::invalid_argument("key '" + key + "' expects a single value");
  }
  const int v = std::stoi(it->second[0]);
  kv.erase(it);
  return v;
}

Interval take_interval(KeyValues& kv, const std::string& key,
                       Interval fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  if (it->second.size() != 2) {
    throw std::invalid_argument("key '" + key + "' expects two values");
  }
  Interval iv{std::stod(it->second[0]), std::stod(it->second[1])};
  kv.erase(it);
  return iv;
}

}  // namespace

ScenarioConfig config_from_keys(KeyValues& kv) {
  ScenarioConfig c;
  c.n_aggregators = take_int(kv, "n_aggregators", c.n_aggregators);
  c.n_buyers = take_int(kv, "n_buyers", c.n_buyers);
  if (auto it = kv.find("phevs_per_aggregator"); it != kv.end()) {
    if (it->second.size() != 2) {
      throw std::invalid_argument("phevs_per_aggregator expects two values");
    }
    c.phevs_per_aggregator = {std::stoi(it->second[0]),
                              std::stoi(it->second[1])};
    kv.erase(it);
  }
  c.reserve_miles = take_interval(kv, "reserve_miles", c.reserve_miles);
  c.battery_miles = take_double(kv, "battery_miles", c.battery_miles);
  c.kwh_per_100_miles =
      take_double(kv, "kwh_per_100_miles", c.kwh_per_100_miles);
  c.seller_reservation =
      take_interval(kv, "seller_reservation", c.seller_reservation);
  c.buyer_bid = take_interval(kv, "buyer_bid", c.buyer_bid);
  c.buyer_demand = take_interval(kv, "buyer_demand", c.buyer_demand);
  c.gamma = take_double(kv, "gamma", c.gamma);
  c.eta = take_interval(kv, "eta", c.eta);
  c.upsilon = take_interval(kv, "upsilon", c.upsilon);
  if (auto it = kv.find("cost_model"); it != kv.end()) {
    if (it->second.size() != 1) {
      throw std::invalid_argument("cost_model expects a single value");
    }
    const std::string& v = it->second[0];
    if (v == "linear") {
      c.cost_model = micro::CostModel::Linear;
    } else if (v == "quadratic") {
      c.cost_model = micro::CostModel::Quadratic;
    } else {
      throw std::invalid_argument("cost_model must be linear or quadratic");
    }
    kv.erase(it);
  }
  if (auto it = kv.find("seed"); it != kv.end()) {
    if (it->second.size() != 1) {
      throw std::invalid_argument("seed expects a single value");
    }
    c.seed = std::stoull(it->second[0]);
    kv.erase(it);
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  KeyValues kv = read_key_values_file(path);
  ScenarioConfig c = config_from_keys(kv);
  if (!kv.empty()) {
    throw std::invalid_argument("unknown config key '" + kv.begin()->first +
                                "' in " + path);
  }
  return c;
}

}  // namespace v2g::scenario
