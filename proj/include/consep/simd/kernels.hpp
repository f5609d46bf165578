#pragma once

#include <cstddef>
#include <span>
#include <string>

// Data-parallel inner-loop kernels with scalar reference implementations and
// an AVX2 variant selected at runtime.  The dispatched functions are what the
// rest of the library calls; the per-ISA entry points stay visible so the
// equivalence tests can compare them directly.

namespace consep::simd {

enum class Isa { scalar, avx2 };

// ISA chosen at startup (CPU probe, overridable via CONSEP_SIMD=scalar|avx2).
Isa active_isa();
std::string isa_name(Isa isa);

// Forces a specific ISA for the rest of the process.  Throws if the requested
// ISA is not available on this machine.
void force_isa(Isa isa);

// ||a - b||^2.  Spans must have equal length.
double squared_distance(std::span<const double> a, std::span<const double> b);

// Number of entries v[i] >= threshold.  Exact, including +/-inf.
std::size_t count_ge(std::span<const double> v, double threshold);

// acc[i] += x[i].
void accumulate(std::span<double> acc, std::span<const double> x);

namespace detail {

double squared_distance_scalar(std::span<const double> a, std::span<const double> b);
std::size_t count_ge_scalar(std::span<const double> v, double threshold);
void accumulate_scalar(std::span<double> acc, std::span<const double> x);

#if CONSEP_HAVE_AVX2
double squared_distance_avx2(std::span<const double> a, std::span<const double> b);
std::size_t count_ge_avx2(std::span<const double> v, double threshold);
void accumulate_avx2(std::span<double> acc, std::span<const double> x);
#endif

}  // namespace detail

}  // namespace consep::simd
