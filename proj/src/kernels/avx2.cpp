// Built with -mavx2 -mfma when the compiler targets x86-64; only reached
// through the dispatcher after a CPUID check.

#include "invdet/kernels/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define INVDET_HAVE_AVX2 1
#else
#define INVDET_HAVE_AVX2 0
#endif

namespace invdet::kernels::avx2 {

#if INVDET_HAVE_AVX2

bool compiled() noexcept { return true; }

namespace {

// acc += x * conj(b) for two packed complex values in x:
// x * conj(b) = fmaddsub(x, re(b), swap(x) * -im(b))
inline __m256d cmul_conj_acc(__m256d acc, __m256d x, __m256d br, __m256d bi_neg) {
  const __m256d swapped = _mm256_permute_pd(x, 0b0101);  // [xi, xr, xi, xr]
  const __m256d cross = _mm256_mul_pd(swapped, bi_neg);
  return _mm256_add_pd(acc, _mm256_fmaddsub_pd(x, br, cross));
}

}  // namespace

void scatter_matrix(const std::complex<double>* z, std::size_t n, std::size_t k,
                    std::complex<double>* out) {
  const auto* base = reinterpret_cast<const double*>(z);
  auto* dst = reinterpret_cast<double*>(out);
  const std::size_t pairs = n / 2;  // complex pairs per column handled by one register

  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = 0;
    for (; p + 4 <= pairs; p += 4) {
      __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
      __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
      for (std::size_t c = 0; c < k; ++c) {
        const double* col = base + 2 * c * n;
        const __m256d br = _mm256_set1_pd(col[2 * j]);
        const __m256d bi = _mm256_set1_pd(-col[2 * j + 1]);
        a0 = cmul_conj_acc(a0, _mm256_loadu_pd(col + 4 * p), br, bi);
        a1 = cmul_conj_acc(a1, _mm256_loadu_pd(col + 4 * (p + 1)), br, bi);
        a2 = cmul_conj_acc(a2, _mm256_loadu_pd(col + 4 * (p + 2)), br, bi);
        a3 = cmul_conj_acc(a3, _mm256_loadu_pd(col + 4 * (p + 3)), br, bi);
      }
      double* o = dst + 2 * j * n + 4 * p;
      _mm256_storeu_pd(o, a0);
      _mm256_storeu_pd(o + 4, a1);
      _mm256_storeu_pd(o + 8, a2);
      _mm256_storeu_pd(o + 12, a3);
    }
    for (; p < pairs; ++p) {
      __m256d a0 = _mm256_setzero_pd();
      for (std::size_t c = 0; c < k; ++c) {
        const double* col = base + 2 * c * n;
        a0 = cmul_conj_acc(a0, _mm256_loadu_pd(col + 4 * p), _mm256_set1_pd(col[2 * j]),
                           _mm256_set1_pd(-col[2 * j + 1]));
      }
      _mm256_storeu_pd(dst + 2 * j * n + 4 * p, a0);
    }
    if (n % 2 == 1) {
      const std::size_t i = n - 1;
      double re = 0.0, im = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        const std::complex<double> a = z[c * n + i];
        const std::complex<double> b = z[c * n + j];
        re += a.real() * b.real() + a.imag() * b.imag();
        im += a.imag() * b.real() - a.real() * b.imag();
      }
      out[j * n + i] = {re, im};
    }
  }
  // make the result exactly Hermitian: mirror the lower triangle
  for (std::size_t j = 0; j < n; ++j) {
    out[j * n + j] = {out[j * n + j].real(), 0.0};
    for (std::size_t i = j + 1; i < n; ++i) out[i * n + j] = std::conj(out[j * n + i]);
  }
}

void split_statistics(SplitStatistic which, const double* p1, const double* p2, std::size_t count,
                      double lmpid_scale, double* out) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d scale = _mm256_set1_pd(lmpid_scale);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d x = _mm256_loadu_pd(p1 + i);
    const __m256d y = _mm256_loadu_pd(p2 + i);
    __m256d r;
    switch (which) {
      case SplitStatistic::Glrt:
        r = _mm256_div_pd(_mm256_sub_pd(one, x), x);
        break;
      case SplitStatistic::TwoStepGlrt:
        r = _mm256_div_pd(_mm256_sub_pd(one, x), _mm256_mul_pd(x, y));
        break;
      case SplitStatistic::Lmpid:
      default:
        r = _mm256_sub_pd(_mm256_mul_pd(_mm256_mul_pd(scale, y), _mm256_sub_pd(one, x)),
                          _mm256_mul_pd(x, y));
        break;
    }
    _mm256_storeu_pd(out + i, r);
  }
  if (i < count) scalar::split_statistics(which, p1 + i, p2 + i, count - i, lmpid_scale, out + i);
}

std::size_t count_exceeding(const double* values, std::size_t count, double threshold) {
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t hits = 0;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d v = _mm256_loadu_pd(values + i);
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(v, t, _CMP_GT_OQ));
    hits += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  return hits + scalar::count_exceeding(values + i, count - i, threshold);
}

#else

bool compiled() noexcept { return false; }

void scatter_matrix(const std::complex<double>* z, std::size_t n, std::size_t k,
                    std::complex<double>* out) {
  scalar::scatter_matrix(z, n, k, out);
}

void split_statistics(SplitStatistic which, const double* p1, const double* p2, std::size_t count,
                      double lmpid_scale, double* out) {
  scalar::split_statistics(which, p1, p2, count, lmpid_scale, out);
}

std::size_t count_exceeding(const double* values, std::size_t count, double threshold) {
  return scalar::count_exceeding(values, count, threshold);
}

#endif

}  // namespace invdet::kernels::avx2
