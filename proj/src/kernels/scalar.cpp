#include "invdet/kernels/kernels.hpp"

namespace invdet::kernels::scalar {

void scatter_matrix(const std::complex<double>* z, std::size_t n, std::size_t k,
                    std::complex<double>* out) {
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        const std::complex<double> a = z[c * n + i];
        const std::complex<double> b = z[c * n + j];
        // a * conj(b)
        re += a.real() * b.real() + a.imag() * b.imag();
        im += a.imag() * b.real() - a.real() * b.imag();
      }
      out[j * n + i] = {re, i == j ? 0.0 : im};
      out[i * n + j] = {re, i == j ? 0.0 : -im};
    }
  }
}

void split_statistics(SplitStatistic which, const double* p1, const double* p2, std::size_t count,
                      double lmpid_scale, double* out) {
  switch (which) {
    case SplitStatistic::Glrt:
      for (std::size_t i = 0; i < count; ++i) out[i] = (1.0 - p1[i]) / p1[i];
      break;
    case SplitStatistic::TwoStepGlrt:
      for (std::size_t i = 0; i < count; ++i) out[i] = (1.0 - p1[i]) / (p1[i] * p2[i]);
      break;
    case SplitStatistic::Lmpid:
      for (std::size_t i = 0; i < count; ++i)
        out[i] = lmpid_scale * p2[i] * (1.0 - p1[i]) - p1[i] * p2[i];
      break;
  }
}

std::size_t count_exceeding(const double* values, std::size_t count, double threshold) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < count; ++i) hits += values[i] > threshold ? 1 : 0;
  return hits;
}

}  // namespace invdet::kernels::scalar
