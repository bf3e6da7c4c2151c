#include "v2g/kernels.hpp"

#include <algorithm>

namespace v2g::kernels::detail {

void linear_best_response_scalar(double price, const double* eta,
                                 const double* a_max, double* out,
                                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (eta[i] < price) ? a_max[i] : 0.0;
  }
}

void quadratic_best_response_scalar(double price, const double* eta,
                                    const double* upsilon, const double* a_max,
                                    double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double unclamped = (price - eta[i]) / (2.0 * upsilon[i]);
    out[i] = std::min(std::max(unclamped, 0.0), a_max[i]);
  }
}

}  // namespace v2g::kernels::detail
