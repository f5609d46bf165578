#include "consep/simd/kernels.hpp"

namespace consep::simd::detail {

double squared_distance_scalar(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

std::size_t count_ge_scalar(std::span<const double> v, double threshold) {
  std::size_t n = 0;
  for (double x : v) n += (x >= threshold) ? 1 : 0;
  return n;
}

void accumulate_scalar(std::span<double> acc, std::span<const double> x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += x[i];
}

}  // namespace consep::simd::detail
