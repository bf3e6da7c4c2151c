#pragma once

#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "v2g/auction.hpp"

// Closed-form market analysis for large systems where the step curves are
// approximated by straight lines: Supply(P) = alpha * P and
// Demand(P) = Q_0 - beta * P. Covers the linear-cost equilibrium price
// and utilities, the quadratic-cost supply coefficients, the existence
// conditions, and the coupled fixed-point equations for (P*, A_n*) that
// cross-validate the iterative mechanism.

namespace v2g::equilibrium {

struct LinearMarketModel {
  double alpha = 0.0;  // supply slope, MWh per $/MWh
  double beta = 0.0;   // demand slope
  double q0 = 0.0;     // demand intercept, MWh
};

// P* = Q_0 / (alpha + beta). Throws std::runtime_error when alpha + beta
// == 0 (singular market).
double equilibrium_price(const LinearMarketModel& model);

struct PhevEquilibrium {
  double a_star = 0.0;
  double u_star = 0.0;
};

// Linear-cost PHEV at the equilibrium price: sells a_max with utility
// (gamma * P* - eta) * a_max when eta < gamma * P*, otherwise stays out.
PhevEquilibrium phev_equilibrium_utility(const LinearMarketModel& model,
                                         double gamma, double eta,
                                         double a_max);

// Sum of the equilibrium utilities over the participating PHEVs
// {i : eta_i < gamma * P*}. `phevs` holds (eta, a_max) pairs.
double aggregator_equilibrium_utility(
    const LinearMarketModel& model, double gamma,
    std::span<const std::pair<double, double>> phevs);

struct QuadraticSupplyCoefficients {
  double c_n = 0.0;  // sum of 1 / (2 upsilon_i)
  double d_n = 0.0;  // sum of eta_i / (2 upsilon_i)
  bool degenerate = false;  // empty PHEV list
};

// `phevs` holds (eta, upsilon) pairs; throws on upsilon <= 0. The
// unclamped aggregate supply is A_n = c_n * p_n - d_n.
QuadraticSupplyCoefficients supply_coefficients(
    std::span<const std::pair<double, double>> phevs);

// Whether any PHEV's unclamped best response exceeds its a_max at the
// given announced price, invalidating the unclamped aggregate formula.
// `phevs` holds (eta, upsilon, a_max) triples.
bool any_response_clamped(
    std::span<const std::tuple<double, double, double>> phevs,
    double announced_price);

struct ExistenceConditions {
  bool cond_a = false;  // (beta + d)^2 - 4 (d beta - C Q_0) >= 0
  bool cond_p = false;  // (beta - d)^2 + 4 C Q_0 >= 0
};

ExistenceConditions check_existence_conditions(const QuadraticSupplyCoefficients& coeffs,
                              double beta, double q0);

// Discriminant of the commission-corrected quantity equation
// A^2 + (beta + d) A + beta d - C gamma Q_0 = 0.
double quantity_discriminant(const QuadraticSupplyCoefficients& coeffs,
                             double beta, double q0, double gamma);

struct QuadraticRoots {
  int count = 0;  // 0, 1, or 2 real roots
  double roots[2] = {0.0, 0.0};
};

// Real roots of A^2 + (beta + d) A + (beta d - C gamma Q_0) = 0.
QuadraticRoots solve_quantity_fixed_point(
    const QuadraticSupplyCoefficients& coeffs, double beta, double q0,
    double gamma);

// Real roots of C gamma P^2 + (beta - d) P - Q_0 = 0 (linear when
// C gamma == 0).
QuadraticRoots solve_price_fixed_point(
    const QuadraticSupplyCoefficients& coeffs, double beta, double q0,
    double gamma);

struct EquilibriumSolution {
  bool exists = false;
  bool existence_satisfied = false;
  double a_star = 0.0;
  double p_star = 0.0;
};

// Combine both fixed-point equations: the admissible equilibrium has
// A* >= 0, P* >= 0 and P* = Q_0 / (A* + beta).
EquilibriumSolution solve_equilibrium(const QuadraticSupplyCoefficients& coeffs,
                                      double beta, double q0, double gamma);

// Alternate P(t) = Q_0 / (A(t) + beta) and A(t+1) = C gamma P(t) - d
// (clamped at 0) starting from p0; returns the price sequence of length
// `steps`. Throws std::runtime_error if A + beta hits 0.
std::vector<double> iterate_price(const QuadraticSupplyCoefficients& coeffs,
                                  double beta, double q0, double gamma,
                                  double p0, int steps);

struct MonotonicityReport {
  double utility_1 = 0.0;
  double utility_2 = 0.0;
  bool alpha_applicable = false;  // model 1 and 2 differ only in alpha
  bool beta_applicable = false;
  bool q0_applicable = false;
  bool alpha_holds = true;  // higher alpha -> lower utility
  bool beta_holds = true;   // higher beta -> lower utility
  bool q0_holds = true;     // higher Q_0 -> higher utility
  bool all_hold = true;
};

// Evaluate the aggregator utility in both markets for the same PHEV
// population and check the directional claims for whichever single
// parameter differs.
MonotonicityReport monotonicity_report(
    const LinearMarketModel& market_1, const LinearMarketModel& market_2,
    double gamma, std::span<const std::pair<double, double>> phevs);

struct LinearFit {
  LinearMarketModel model;
  double supply_residual = 0.0;  // RMS over the sample prices
  double demand_residual = 0.0;
  bool degenerate = false;  // too few distinct sample prices for a fit
};

// Least-squares fit of the step curves to Supply = alpha P (through the
// origin) and Demand = Q_0 - beta P, sampled at the union of the two
// curves' breakpoint prices restricted to the overlap of their price
// supports. Throws std::invalid_argument on an empty curve.
LinearFit fit_linear_curves(const auction::StepCurve& supply,
                            const auction::StepCurve& demand);

}  // namespace v2g::equilibrium
