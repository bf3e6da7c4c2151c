#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "v2g/auction.hpp"
#include "v2g/micro.hpp"

// Iterative market mechanism coupling the two layers: aggregators submit
// (S_n, A_n) asks, the double auction prices and allocates, each
// aggregator announces p_n = gamma_n * P to its PHEVs, and the PHEVs'
// best responses form the next round's supply. Stops when the relative
// price change drops below xi or after t_max iterations. The greedy
// baseline is a single round with every PHEV offering a_max.

namespace v2g::mechanism {

enum class InitialProposalPolicy { AllMax, Zero, Custom };

struct MechanismConfig {
  int t_max = 50;
  double xi = 1e-4;
  InitialProposalPolicy initial_proposals = InitialProposalPolicy::AllMax;
  // Per-PHEV proposals and allocations grow as iterations x fleet size;
  // large sweeps turn this off and keep only per-aggregator figures.
  bool record_phev_detail = true;
};

enum class StopReason { PriceConverged, MaxIterations, NoTrade };

struct AggregatorIterationRecord {
  std::uint32_t aggregator_id = 0;
  double supply = 0.0;           // A_n submitted this round
  double sold = 0.0;             // Q_n from the auction
  double announced_price = 0.0;  // p_n = gamma_n * P
  double utility = 0.0;          // U_n = sum of PHEV utilities
  double commission = 0.0;       // (1 - gamma_n) * P * Q_n
};

struct IterationRecord {
  int t = 0;
  bool priced = false;
  bool traded = false;
  double price = 0.0;  // valid when priced
  std::vector<AggregatorIterationRecord> aggregators;
  // Empty unless record_phev_detail; outer index follows the aggregator
  // list, inner the PHEV list.
  std::vector<std::vector<double>> proposals;
  std::vector<std::vector<double>> allocations;
};

struct MechanismTrace {
  std::vector<IterationRecord> iterations;
  bool converged = false;
  StopReason stop_reason = StopReason::MaxIterations;

  const IterationRecord& final_iteration() const { return iterations.back(); }
  double final_price() const;          // price of the last priced iteration
  bool has_final_price() const;
  double total_utility() const;        // sum of U_n in the final iteration
  double mean_utility_per_aggregator() const;
};

// Relative-price stopping rule |P_t - P_prev| / |P_t| < xi. A zero price
// only counts as converged against a zero previous price.
bool has_converged(double p_t, double p_prev, double xi);

MechanismTrace run_market(std::span<const auction::BuyBid> buyers,
                          std::span<const micro::AggregatorState> aggregators,
                          const MechanismConfig& config);

MechanismTrace run_greedy(std::span<const auction::BuyBid> buyers,
                          std::span<const micro::AggregatorState> aggregators);

std::string to_string(StopReason reason);

}  // namespace v2g::mechanism
