#include "v2g/mechanism.hpp"

#include <cmath>
#include <stdexcept>

#include "v2g/kernels.hpp"

namespace v2g::mechanism {

namespace {

// Contiguous per-aggregator cost arrays so best responses run through the
// batch kernels; PHEVs are split by cost model and written back in place.
struct AggregatorArrays {
  std::vector<double> eta;
  std::vector<double> upsilon;
  std::vector<double> a_max;
  std::vector<std::size_t> linear_idx;
  std::vector<std::size_t> quadratic_idx;
  std::vector<double> lin_eta, lin_amax, lin_out;
  std::vector<double> quad_eta, quad_ups, quad_amax, quad_out;
};

AggregatorArrays pack(const micro::AggregatorState& agg) {
  AggregatorArrays arr;
  const std::size_t n = agg.phevs.size();
  arr.eta.reserve(n);
  arr.upsilon.reserve(n);
  arr.a_max.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const micro::Phev& phev = agg.phevs[i];
    if (phev.a_max < 0.0) {
      throw std::invalid_argument("PHEV a_max must be >= 0");
    }
    arr.eta.push_back(phev.cost.eta);
    arr.upsilon.push_back(phev.cost.upsilon);
    arr.a_max.push_back(phev.a_max);
    if (phev.cost.model == micro::CostModel::Linear) {
      arr.linear_idx.push_back(i);
      arr.lin_eta.push_back(phev.cost.eta);
      arr.lin_amax.push_back(phev.a_max);
    } else {
      if (!(phev.cost.upsilon > 0.0)) {
        throw std::invalid_argument("quadratic PHEV needs upsilon > 0");
      }
      arr.quadratic_idx.push_back(i);
      arr.quad_eta.push_back(phev.cost.eta);
      arr.quad_ups.push_back(phev.cost.upsilon);
      arr.quad_amax.push_back(phev.a_max);
    }
  }
  arr.lin_out.resize(arr.linear_idx.size());
  arr.quad_out.resize(arr.quadratic_idx.size());
  return arr;
}

void best_respond(AggregatorArrays& arr, double p_n,
                  std::vector<double>& proposals) {
  kernels::linear_best_response(p_n, arr.lin_eta.data(), arr.lin_amax.data(),
                                arr.lin_out.data(), arr.lin_out.size());
  kernels::quadratic_best_response(p_n, arr.quad_eta.data(),
                                   arr.quad_ups.data(), arr.quad_amax.data(),
                                   arr.quad_out.data(), arr.quad_out.size());
  for (std::size_t j = 0; j < arr.linear_idx.size(); ++j) {
    proposals[arr.linear_idx[j]] = arr.lin_out[j];
  }
  for (std::size_t j = 0; j < arr.quadratic_idx.size(); ++j) {
    proposals[arr.quadratic_idx[j]] = arr.quad_out[j];
  }
}

std::vector<std::vector<double>> initial_proposals(
    std::span<const micro::AggregatorState> aggregators,
    const MechanismConfig& config) {
  std::vector<std::vector<double>> proposals(aggregators.size());
  for (std::size_t n = 0; n < aggregators.size(); ++n) {
    const auto& agg = aggregators[n];
    switch (config.initial_proposals) {
      case InitialProposalPolicy::AllMax:
        proposals[n].reserve(agg.phevs.size());
        for (const auto& phev : agg.phevs) proposals[n].push_back(phev.a_max);
        break;
      case InitialProposalPolicy::Zero:
        proposals[n].assign(agg.phevs.size(), 0.0);
        break;
      case InitialProposalPolicy::Custom:
        if (agg.proposals.size() != agg.phevs.size()) {
          throw std::invalid_argument(
              "Custom initial proposals must align with the PHEV list");
        }
        proposals[n] = agg.proposals;
        break;
    }
  }
  return proposals;
}

}  // namespace

bool has_converged(double p_t, double p_prev, double xi) {
  if (p_t == 0.0) return p_prev == 0.0;
  return std::abs(p_t - p_prev) / std::abs(p_t) < xi;
}

double MechanismTrace::final_price() const {
  for (auto it = iterations.rbegin(); it != iterations.rend(); ++it) {
    if (it->priced) return it->price;
  }
  return 0.0;
}

bool MechanismTrace::has_final_price() const {
  for (const auto& iter : iterations) {
    if (iter.priced) return true;
  }
  return false;
}

double MechanismTrace::total_utility() const {
  double u = 0.0;
  for (const auto& agg : iterations.back().aggregators) u += agg.utility;
  return u;
}

double MechanismTrace::mean_utility_per_aggregator() const {
  const auto& aggs = iterations.back().aggregators;
  if (aggs.empty()) return 0.0;
  return total_utility() / static_cast<double>(aggs.size());
}

MechanismTrace run_market(std::span<const auction::BuyBid> buyers,
                          std::span<const micro::AggregatorState> aggregators,
                          const MechanismConfig& config) {
  if (buyers.empty() || aggregators.empty()) {
    throw std::invalid_argument("need at least one buyer and one aggregator");
  }
  if (config.t_max < 1 || !(config.xi > 0.0)) {
    throw std::invalid_argument("need t_max >= 1 and xi > 0");
  }

  std::vector<AggregatorArrays> arrays;
  arrays.reserve(aggregators.size());
  for (const auto& agg : aggregators) {
    if (!(agg.gamma > 0.0 && agg.gamma < 1.0)) {
      throw std::invalid_argument("commission rate must lie in (0, 1)");
    }
    arrays.push_back(pack(agg));
  }

  std::vector<std::vector<double>> proposals =
      initial_proposals(aggregators, config);

  MechanismTrace trace;
  double p_prev = 0.0;
  std::vector<auction::Ask> asks(aggregators.size());

  for (int t = 1; t <= config.t_max; ++t) {
    for (std::size_t n = 0; n < aggregators.size(); ++n) {
      asks[n] = {aggregators[n].id, aggregators[n].reservation_price,
                 micro::aggregate_supply(proposals[n])};
    }
    const auction::AuctionOutcome outcome = auction::clear(asks, buyers);

    IterationRecord rec;
    rec.t = t;
    rec.priced = outcome.priced;
    rec.traded = outcome.traded;
    rec.price = outcome.price;
    rec.aggregators.resize(aggregators.size());
    if (config.record_phev_detail) rec.proposals = proposals;

    if (!outcome.priced) {
      // No crossing: the price is undefined and the iteration cannot
      // continue (all utilities are zero, nothing is sold).
      for (std::size_t n = 0; n < aggregators.size(); ++n) {
        rec.aggregators[n] = {aggregators[n].id, asks[n].quantity, 0.0, 0.0,
                              0.0, 0.0};
      }
      if (config.record_phev_detail) {
        rec.allocations.assign(aggregators.size(), {});
        for (std::size_t n = 0; n < aggregators.size(); ++n) {
          rec.allocations[n].assign(aggregators[n].phevs.size(), 0.0);
        }
      }
      trace.iterations.push_back(std::move(rec));
      trace.stop_reason = StopReason::NoTrade;
      return trace;
    }

    const double price = outcome.price;
    if (config.record_phev_detail) rec.allocations.resize(aggregators.size());
    for (std::size_t n = 0; n < aggregators.size(); ++n) {
      const auto& agg = aggregators[n];
      const double sold = outcome.seller_allocations[n];
      const double p_n = micro::announce_price(agg.gamma, price);
      std::vector<double> q = micro::allocate_to_phevs(proposals[n], sold);
      double utility = 0.0;
      for (std::size_t i = 0; i < agg.phevs.size(); ++i) {
        utility += micro::phev_utility(agg.phevs[i].cost, p_n, q[i]);
      }
      rec.aggregators[n] = {agg.id,  asks[n].quantity,
                            sold,    p_n,
                            utility, (1.0 - agg.gamma) * price * sold};
      if (config.record_phev_detail) rec.allocations[n] = std::move(q);
    }
    trace.iterations.push_back(std::move(rec));

    if (t >= 2 && has_converged(price, p_prev, config.xi)) {
      trace.converged = true;
      trace.stop_reason = StopReason::PriceConverged;
      return trace;
    }
    p_prev = price;

    for (std::size_t n = 0; n < aggregators.size(); ++n) {
      const double p_n = aggregators[n].gamma * price;
      best_respond(arrays[n], p_n, proposals[n]);
    }
  }

  trace.stop_reason = StopReason::MaxIterations;
  return trace;
}

MechanismTrace run_greedy(std::span<const auction::BuyBid> buyers,
                          std::span<const micro::AggregatorState> aggregators) {
  MechanismConfig config;
  config.t_max = 1;
  config.initial_proposals = InitialProposalPolicy::AllMax;
  return run_market(buyers, aggregators, config);
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::PriceConverged:
      return "price_converged";
    case StopReason::MaxIterations:
      return "max_iterations";
    case StopReason::NoTrade:
      return "no_trade";
  }
  return "unknown";
}

}  // namespace v2g::mechanism
