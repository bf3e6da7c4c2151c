#include "v2g/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace v2g::equilibrium {

namespace {

void validate_model(const LinearMarketModel& model) {
  if (model.alpha < 0.0 || model.beta < 0.0 || model.q0 < 0.0) {
    throw std::invalid_argument("market model parameters must be >= 0");
  }
}

void validate_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("commission rate must lie in (0, 1)");
  }
}

// Numerically stable real roots of a x^2 + b x + c = 0, ascending.
QuadraticRoots solve_quadratic(double a, double b, double c) {
  QuadraticRoots out;
  if (a == 0.0) {
    if (b == 0.0) {
      if (c == 0.0) {  // identically zero; report the trivial root
        out.count = 1;
        out.roots[0] = 0.0;
      }
      return out;
    }
    out.count = 1;
    out.roots[0] = -c / b;
    return out;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  const double q = (b >= 0.0) ? (-b - sq) / 2.0 : (-b + sq) / 2.0;
  double r1 = q / a;
  double r2 = (q != 0.0) ? c / q : -b / (2.0 * a);
  if (r1 > r2) std::swap(r1, r2);
  out.count = (disc == 0.0) ? 1 : 2;
  out.roots[0] = r1;
  out.roots[1] = r2;
  return out;
}

}  // namespace

double equilibrium_price(const LinearMarketModel& model) {
  validate_model(model);
  const double denom = model.alpha + model.beta;
  if (denom == 0.0) {
    throw std::runtime_error("singular market: alpha + beta == 0");
  }
  return model.q0 / denom;
}

PhevEquilibrium phev_equilibrium_utility(const LinearMarketModel& model,
                                         double gamma, double eta,
                                         double a_max) {
  validate_gamma(gamma);
  const double threshold = gamma * equilibrium_price(model);
  if (eta >= threshold) return {0.0, 0.0};
  return {a_max, (threshold - eta) * a_max};
}

double aggregator_equilibrium_utility(
    const LinearMarketModel& model, double gamma,
    std::span<const std::pair<double, double>> phevs) {
  double total = 0.0;
  for (const auto& [eta, a_max] : phevs) {
    total += phev_equilibrium_utility(model, gamma, eta, a_max).u_star;
  }
  return total;
}

QuadraticSupplyCoefficients supply_coefficients(
    std::span<const std::pair<double, double>> phevs) {
  QuadraticSupplyCoefficients out;
  out.degenerate = phevs.empty();
  for (const auto& [eta, upsilon] : phevs) {
    if (!(upsilon > 0.0)) {
      throw std::invalid_argument("upsilon must be > 0");
    }
    out.c_n += 1.0 / (2.0 * upsilon);
    out.d_n += eta / (2.0 * upsilon);
  }
  return out;
}

bool any_response_clamped(
    std::span<const std::tuple<double, double, double>> phevs,
    double announced_price) {
  for (const auto& [eta, upsilon, a_max] : phevs) {
    if (!(upsilon > 0.0)) {
      throw std::invalid_argument("upsilon must be > 0");
    }
    if ((announced_price - eta) / (2.0 * upsilon) > a_max) return true;
  }
  return false;
}

ExistenceConditions check_existence_conditions(const QuadraticSupplyCoefficients& coeffs,
                              double beta, double q0) {
  const double c = coeffs.c_n;
  const double d = coeffs.d_n;
  ExistenceConditions out;
  out.cond_a = (beta + d) * (beta + d) - 4.0 * (d * beta - c * q0) >= 0.0;
  out.cond_p = (beta - d) * (beta - d) + 4.0 * c * q0 >= 0.0;
  return out;
}

double quantity_discriminant(const QuadraticSupplyCoefficients& coeffs,
                             double beta, double q0, double gamma) {
  const double b = beta + coeffs.d_n;
  return b * b - 4.0 * (beta * coeffs.d_n - coeffs.c_n * gamma * q0);
}

QuadraticRoots solve_quantity_fixed_point(
    const QuadraticSupplyCoefficients& coeffs, double beta, double q0,
    double gamma) {
  return solve_quadratic(1.0, beta + coeffs.d_n,
                         beta * coeffs.d_n - coeffs.c_n * gamma * q0);
}

QuadraticRoots solve_price_fixed_point(
    const QuadraticSupplyCoefficients& coeffs, double beta, double q0,
    double gamma) {
  return solve_quadratic(coeffs.c_n * gamma, beta - coeffs.d_n, -q0);
}

EquilibriumSolution solve_equilibrium(const QuadraticSupplyCoefficients& coeffs,
                                      double beta, double q0, double gamma) {
  EquilibriumSolution out;
  const ExistenceConditions conds = check_existence_conditions(coeffs, beta, q0);
  out.existence_satisfied = conds.cond_a && conds.cond_p;

  const QuadraticRoots roots =
      solve_quantity_fixed_point(coeffs, beta, q0, gamma);
  // The sum of roots is -(beta + d) <= 0, so at most one root is strictly
  // positive; take the largest non-negative one.
  for (int i = roots.count - 1; i >= 0; --i) {
    const double a = roots.roots[i];
    if (a < 0.0) continue;
    if (a + beta == 0.0) continue;
    out.exists = true;
    out.a_star = a;
    out.p_star = q0 / (a + beta);
    break;
  }
  return out;
}

std::vector<double> iterate_price(const QuadraticSupplyCoefficients& coeffs,
                                  double beta, double q0, double gamma,
                                  double p0, int steps) {
  if (!(p0 >= 0.0) || steps < 1) {
    throw std::invalid_argument("need p0 >= 0 and steps >= 1");
  }
  std::vector<double> prices;
  prices.reserve(static_cast<std::size_t>(steps));
  double p = p0;
  for (int t = 0; t < steps; ++t) {
    // Supply cannot go negative even though the affine formula can.
    const double a = std::max(0.0, coeffs.c_n * gamma * p - coeffs.d_n);
    if (a + beta == 0.0) {
      throw std::runtime_error("singular iteration: A + beta == 0");
    }
    p = q0 / (a + beta);
    prices.push_back(p);
  }
  return prices;
}

MonotonicityReport monotonicity_report(
    const LinearMarketModel& market_1, const LinearMarketModel& market_2,
    double gamma, std::span<const std::pair<double, double>> phevs) {
  MonotonicityReport out;
  out.utility_1 = aggregator_equilibrium_utility(market_1, gamma, phevs);
  out.utility_2 = aggregator_equilibrium_utility(market_2, gamma, phevs);

  const double tol =
      1e-9 * std::max({1.0, std::abs(out.utility_1), std::abs(out.utility_2)});
  const auto lower_in_1 = [&] { return out.utility_1 <= out.utility_2 + tol; };
  const auto higher_in_1 = [&] { return out.utility_1 + tol >= out.utility_2; };

  out.alpha_applicable = market_1.alpha != market_2.alpha &&
                         market_1.beta == market_2.beta &&
                         market_1.q0 == market_2.q0;
  out.beta_applicable = market_1.beta != market_2.beta &&
                        market_1.alpha == market_2.alpha &&
                        market_1.q0 == market_2.q0;
  out.q0_applicable = market_1.q0 != market_2.q0 &&
                      market_1.alpha == market_2.alpha &&
                      market_1.beta == market_2.beta;

  if (out.alpha_applicable) {
    out.alpha_holds =
        market_1.alpha > market_2.alpha ? lower_in_1() : higher_in_1();
  }
  if (out.beta_applicable) {
    out.beta_holds =
        market_1.beta > market_2.beta ? lower_in_1() : higher_in_1();
  }
  if (out.q0_applicable) {
    out.q0_holds = market_1.q0 > market_2.q0 ? higher_in_1() : lower_in_1();
  }
  out.all_hold = out.alpha_holds && out.beta_holds && out.q0_holds;
  return out;
}

LinearFit fit_linear_curves(const auction::StepCurve& supply,
                            const auction::StepCurve& demand) {
  if (supply.empty() || demand.empty()) {
    throw std::invalid_argument("cannot fit an empty step curve");
  }

  const double s_min = supply.steps.front().price;
  const double s_max = supply.steps.back().price;
  const double b_max = demand.steps.front().price;
  const double b_min = demand.steps.back().price;
  const double lo = std::max(s_min, b_min);
  const double hi = std::min(s_max, b_max);

  std::vector<double> prices;
  auto collect = [&](const auction::StepCurve& curve, double plo, double phi) {
    for (const auto& step : curve.steps) {
      if (step.price >= plo && step.price <= phi) prices.push_back(step.price);
    }
  };
  collect(supply, lo, hi);
  collect(demand, lo, hi);
  std::sort(prices.begin(), prices.end());
  prices.erase(std::unique(prices.begin(), prices.end()), prices.end());

  LinearFit fit;
  if (prices.size() < 2) {
    // Price supports barely overlap; fall back to every breakpoint.
    fit.degenerate = true;
    prices.clear();
    collect(supply, -1.0, std::numeric_limits<double>::infinity());
    collect(demand, -1.0, std::numeric_limits<double>::infinity());
    std::sort(prices.begin(), prices.end());
    prices.erase(std::unique(prices.begin(), prices.end()), prices.end());
  }
  if (supply.steps.size() < 2 || demand.steps.size() < 2) {
    fit.degenerate = true;
  }

  // Supply = alpha * P, through the origin.
  double spq = 0.0, spp = 0.0;
  for (double p : prices) {
    const double q = supply.supply_at(p);
    spq += p * q;
    spp += p * p;
  }
  fit.model.alpha = spp > 0.0 ? spq / spp : 0.0;

  // Demand = Q_0 - beta * P, ordinary least squares.
  const double n = static_cast<double>(prices.size());
  double sp = 0.0, sq = 0.0;
  for (double p : prices) {
    sp += p;
    sq += demand.demand_at(p);
  }
  const double p_bar = sp / n;
  const double q_bar = sq / n;
  double cov = 0.0, var = 0.0;
  for (double p : prices) {
    const double dp = p - p_bar;
    cov += dp * (demand.demand_at(p) - q_bar);
    var += dp * dp;
  }
  if (var > 0.0) {
    const double slope = cov / var;
    fit.model.beta = -slope;
    fit.model.q0 = q_bar + fit.model.beta * p_bar;
  } else {
    fit.degenerate = true;
    fit.model.beta = 0.0;
    fit.model.q0 = q_bar;
  }

  double sres = 0.0, dres = 0.0;
  for (double p : prices) {
    const double es = supply.supply_at(p) - fit.model.alpha * p;
    const double ed = demand.demand_at(p) - (fit.model.q0 - fit.model.beta * p);
    sres += es * es;
    dres += ed * ed;
  }
  fit.supply_residual = std::sqrt(sres / n);
  fit.demand_residual = std::sqrt(dres / n);
  return fit;
}

}  // namespace v2g::equilibrium
