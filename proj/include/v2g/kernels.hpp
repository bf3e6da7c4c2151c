#pragma once

#include <cstddef>
#include <string>

// Batch PHEV best-response kernels. The mechanism evaluates these over
// every PHEV in every aggregator on every iteration, so they are the hot
// loop of a simulation run. A scalar reference implementation is always
// available; an AVX2 variant is selected at runtime when the CPU supports
// it. Both variants use the same IEEE operations (sub, mul, div, min, max,
// compare/blend) and therefore produce bit-identical results.

namespace v2g::kernels {

enum class Isa { Scalar, Avx2 };

// ISA chosen at startup (best supported). Overridable for testing.
Isa active_isa();
void set_isa(Isa isa);
bool isa_supported(Isa isa);
std::string isa_name(Isa isa);

// out[i] = a_max[i] if eta[i] < price else 0
// (bang-bang best response of a linear discharge cost)
void linear_best_response(double price, const double* eta, const double* a_max,
                          double* out, std::size_t n);

// out[i] = clamp((price - eta[i]) / (2 * upsilon[i]), 0, a_max[i])
void quadratic_best_response(double price, const double* eta,
                             const double* upsilon, const double* a_max,
                             double* out, std::size_t n);

namespace detail {
void linear_best_response_scalar(double price, const double* eta,
                                 const double* a_max, double* out,
                                 std::size_t n);
void quadratic_best_response_scalar(double price, const double* eta,
                                    const double* upsilon, const double* a_max,
                                    double* out, std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
void linear_best_response_avx2(double price, const double* eta,
                               const double* a_max, double* out, std::size_t n);
void quadratic_best_response_avx2(double price, const double* eta,
                                  const double* upsilon, const double* a_max,
                                  double* out, std::size_t n);
#endif
}  // namespace detail

}  // namespace v2g::kernels
