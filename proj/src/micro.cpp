#include "v2g/micro.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace v2g::micro {

double announce_price(double gamma, double market_price) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("commission rate must lie in (0, 1)");
  }
  if (!(market_price >= 0.0) || !std::isfinite(market_price)) {
    throw std::invalid_argument("market price must be finite and >= 0");
  }
  return gamma * market_price;
}

double best_response_linear(double p_n, double eta, double a_max) {
  return (eta < p_n) ? a_max : 0.0;
}

double best_response_quadratic(double p_n, double eta, double upsilon,
                               double a_max) {
  if (!(upsilon > 0.0)) {
    throw std::invalid_argument("upsilon must be > 0 for quadratic cost");
  }
  const double unclamped = (p_n - eta) / (2.0 * upsilon);
  return std::min(std::max(unclamped, 0.0), a_max);
}

double phev_utility(const CostSpec& cost, double p_n, double a) {
  switch (cost.model) {
    case CostModel::Linear:
      return (p_n - cost.eta) * a;
    case CostModel::Quadratic:
      return (p_n - cost.eta) * a - cost.upsilon * a * a;
  }
  return 0.0;
}

double aggregate_supply(std::span<const double> proposals) {
  return std::accumulate(proposals.begin(), proposals.end(), 0.0);
}

std::vector<double> allocate_to_phevs(std::span<const double> proposals,
                                      double sold) {
  std::vector<double> q(proposals.size(), 0.0);
  if (!(sold >= 0.0)) {
    throw std::invalid_argument("allocated quantity must be >= 0");
  }
  if (sold == 0.0) return q;
  const double total = aggregate_supply(proposals);
  if (total <= 0.0) {
    throw std::invalid_argument("cannot allocate a positive quantity over "
                                "all-zero proposals");
  }
  if (sold > total * (1.0 + 1e-12)) {
    throw std::invalid_argument("allocated quantity exceeds aggregate supply");
  }
  const double ratio = std::min(sold, total) / total;
  double assigned = 0.0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    q[i] = proposals[i] * ratio;
    assigned += q[i];
    if (proposals[i] > proposals[largest]) largest = i;
  }
  // Residual correction on the largest proposal keeps the sum exact.
  q[largest] += sold - assigned;
  return q;
}

}  // namespace v2g::micro
