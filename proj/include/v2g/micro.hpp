#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Micro layer: aggregator commission pricing and PHEV supply decisions.
// A PHEV sells energy at the aggregator's announced price p_n = gamma * P
// and pays a discharge cost, either linear (eta * a) or quadratic
// (eta * a + upsilon * a^2). Best responses maximize profit over
// [0, a_max].

namespace v2g::micro {

enum class CostModel { Linear, Quadratic };

struct CostSpec {
  CostModel model = CostModel::Linear;
  double eta = 0.0;      // $/MWh marginal cost offset
  double upsilon = 0.0;  // $/MWh^2 curvature, > 0 for Quadratic
};

struct Phev {
  std::uint32_t id = 0;
  double a_max = 0.0;  // MWh sellable after the owner's reserve
  CostSpec cost;
};

struct AggregatorState {
  std::uint32_t id = 0;
  double gamma = 0.0;              // commission rate, in (0, 1)
  double reservation_price = 0.0;  // S_n, fixed across iterations
  std::vector<Phev> phevs;
  std::vector<double> proposals;  // a_i, aligned with phevs
};

// p_n = gamma * P. Throws std::invalid_argument unless 0 < gamma < 1.
double announce_price(double gamma, double market_price);

// Bang-bang: a_max iff eta < p_n, else 0 (indifference sells nothing).
double best_response_linear(double p_n, double eta, double a_max);

// clamp((p_n - eta) / (2 * upsilon), 0, a_max). Throws on upsilon <= 0.
double best_response_quadratic(double p_n, double eta, double upsilon,
                               double a_max);

// Profit of selling `a` at price p_n under the given cost model.
double phev_utility(const CostSpec& cost, double p_n, double a);

double aggregate_supply(std::span<const double> proposals);

// Split the sold quantity proportionally to the proposals; the largest
// entry absorbs the rounding residual so the split sums to sold exactly.
// Throws std::invalid_argument when sold exceeds the aggregate proposal
// (beyond rounding) or when sold > 0 with all-zero proposals.
std::vector<double> allocate_to_phevs(std::span<const double> proposals,
                                      double sold);

}  // namespace v2g::micro
