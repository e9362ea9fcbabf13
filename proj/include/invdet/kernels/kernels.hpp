#pragma once

// Data-parallel inner loops of the Monte Carlo engine. Each kernel has a
// scalar reference implementation and an AVX2/FMA variant; the public entry
// points dispatch once per process based on CPUID. The variants agree to
// rounding (FMA contraction) and are equivalence-tested against each other.

#include <complex>
#include <cstddef>
#include <string_view>

namespace invdet::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

/// Best ISA supported by the running CPU (and compiled in).
Isa detected_isa() noexcept;

/// ISA used by the dispatching entry points. Defaults to detected_isa();
/// the INVDET_ISA environment variable ("scalar" / "avx2") overrides it.
Isa active_isa() noexcept;

/// Forces the dispatch target; requests for an unsupported ISA fall back to
/// scalar. Returns the ISA actually selected.
Isa set_active_isa(Isa isa) noexcept;

/// Gram matrix out = Z Z^H of a column-major n x k complex matrix. `out` is
/// column-major n x n and fully written (both triangles).
void scatter_matrix(const std::complex<double>* z, std::size_t n, std::size_t k,
                    std::complex<double>* out);

/// Per-element threshold statistics of the split-case maximal invariant:
///   Glrt (1-p1)/p1, TwoStepGlrt (1-p1)/(p1 p2), Lmpid a p2 (1-p1) - p1 p2.
enum class SplitStatistic { Glrt, TwoStepGlrt, Lmpid };

/// out[i] = statistic(p1[i], p2[i]); `lmpid_scale` is used by Lmpid only.
void split_statistics(SplitStatistic which, const double* p1, const double* p2, std::size_t count,
                      double lmpid_scale, double* out);

/// Number of values strictly greater than the threshold.
std::size_t count_exceeding(const double* values, std::size_t count, double threshold);

namespace scalar {
void scatter_matrix(const std::complex<double>* z, std::size_t n, std::size_t k,
                    std::complex<double>* out);
void split_statistics(SplitStatistic which, const double* p1, const double* p2, std::size_t count,
                      double lmpid_scale, double* out);
std::size_t count_exceeding(const double* values, std::size_t count, double threshold);
}  // namespace scalar

namespace avx2 {
bool compiled() noexcept;
void scatter_matrix(const std::complex<double>* z, std::size_t n, std::size_t k,
                    std::complex<double>* out);
void split_statistics(SplitStatistic which, const double* p1, const double* p2, std::size_t count,
                      double lmpid_scale, double* out);
std::size_t count_exceeding(const double* values, std::size_t count, double threshold);
}  // namespace avx2

}  // namespace invdet::kernels
