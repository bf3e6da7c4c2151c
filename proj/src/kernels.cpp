#include "v2g/kernels.hpp"

#include <stdexcept>

namespace v2g::kernels {

namespace {

Isa detect_best_isa() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

Isa g_isa = detect_best_isa();

}  // namespace

Isa active_isa() { return g_isa; }

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

void set_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("requested ISA not supported on this CPU: " +
                                isa_name(isa));
  }
  g_isa = isa;
}

std::string isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

void linear_best_response(double price, const double* eta, const double* a_max,
                          double* out, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (g_isa == Isa::Avx2) {
    detail::linear_best_response_avx2(price, eta, a_max, out, n);
    return;
  }
#endif
  detail::linear_best_response_scalar(price, eta, a_max, out, n);
}

void quadratic_best_response(double price, const double* eta,
                             const double* upsilon, const double* a_max,
                             double* out, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (g_isa == Isa::Avx2) {
    detail::quadratic_best_response_avx2(price, eta, upsilon, a_max, out, n);
    return;
  }
#endif
  detail::quadratic_best_response_scalar(price, eta, upsilon, a_max, out, n);
}

}  // namespace v2g::kernels
