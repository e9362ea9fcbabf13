#include <atomic>
#include <cstdlib>
#include <cstring>

#include "invdet/kernels/kernels.hpp"

namespace invdet::kernels {

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

Isa detected_isa() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = avx2::compiled() && __builtin_cpu_supports("avx2") &&
                         __builtin_cpu_supports("fma");
  return ok ? Isa::Avx2 : Isa::Scalar;
#else
  return Isa::Scalar;
#endif
}

namespace {

Isa initial_isa() noexcept {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("INVDET_ISA")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  }
  return best;
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) noexcept {
  const Isa chosen = (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) ? Isa::Scalar : isa;
  active().store(chosen, std::memory_order_relaxed);
  return chosen;
}

void scatter_matrix(const std::complex<double>* z, std::size_t n, std::size_t k,
                    std::complex<double>* out) {
  if (active_isa() == Isa::Avx2) {
    avx2::scatter_matrix(z, n, k, out);
  } else {
    scalar::scatter_matrix(z, n, k, out);
  }
}

void split_statistics(SplitStatistic which, const double* p1, const double* p2, std::size_t count,
                      double lmpid_scale, double* out) {
  if (active_isa() == Isa::Avx2) {
    avx2::split_statistics(which, p1, p2, count, lmpid_scale, out);
  } else {
    scalar::split_statistics(which, p1, p2, count, lmpid_scale, out);
  }
}

std::size_t count_exceeding(const double* values, std::size_t count, double threshold) {
  return active_isa() == Isa::Avx2 ? avx2::count_exceeding(values, count, threshold)
                                   : scalar::count_exceeding(values, count, threshold);
}

}  // namespace invdet::kernels
