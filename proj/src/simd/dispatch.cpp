#include "consep/simd/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace consep::simd {

namespace {

using SquaredDistanceFn = double (*)(std::span<const double>, std::span<const double>);
using CountGeFn = std::size_t (*)(std::span<const double>, double);
using AccumulateFn = void (*)(std::span<double>, std::span<const double>);

struct Table {
  Isa isa;
  SquaredDistanceFn squared_distance;
  CountGeFn count_ge;
  AccumulateFn accumulate;
};

constexpr Table kScalar{Isa::scalar, detail::squared_distance_scalar,
                        detail::count_ge_scalar, detail::accumulate_scalar};

#if CONSEP_HAVE_AVX2
constexpr Table kAvx2{Isa::avx2, detail::squared_distance_avx2,
                      detail::count_ge_avx2, detail::accumulate_avx2};
#endif

bool avx2_available() {
#if CONSEP_HAVE_AVX2
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
    case Isa::avx2:
#if CONSEP_HAVE_AVX2
      if (avx2_available()) return &kAvx2;
#endif
      return nullptr;
  }
  return nullptr;
}

const Table* pick_initial() {
  if (const char* env = std::getenv("CONSEP_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &kScalar;
    if (want == "avx2") {
      if (const Table* t = table_for(Isa::avx2)) return t;
      throw std::runtime_error("CONSEP_SIMD=avx2 requested but AVX2 is unavailable");
    }
  }
  if (const Table* t = table_for(Isa::avx2)) return t;
  return &kScalar;
}

const Table*& active_table() {
  static const Table* table = pick_initial();
  return table;
}

}  // namespace

Isa active_isa() { return active_table()->isa; }

std::string isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

void force_isa(Isa isa) {
  const Table* t = table_for(isa);
  if (t == nullptr)
    throw std::runtime_error("requested ISA not available: " + isa_name(isa));
  active_table() = t;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active_table()->squared_distance(a, b);
}

std::size_t count_ge(std::span<const double> v, double threshold) {
  return active_table()->count_ge(v, threshold);
}

void accumulate(std::span<double> acc, std::span<const double> x) {
  active_table()->accumulate(acc, x);
}

}  // namespace consep::simd
