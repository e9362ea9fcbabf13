#include "invdet/performance.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <vector>

#include "invdet/distributions.hpp"
#include "invdet/quadrature.hpp"

namespace invdet {

namespace {

void require_split(const Dimensions& dims) {
  dims.validate();
  if (dims.full_subspace()) {
    throw Error(ErrorKind::DomainError, "formula requires m < N; use the ED formulas");
  }
}

void require_full(const Dimensions& dims) {
  dims.validate();
  if (!dims.full_subspace()) throw Error(ErrorKind::DomainError, "ED formulas require m = N");
}

void require_sinr(double sinr) {
  if (!(sinr >= 0.0) || !std::isfinite(sinr)) {
    throw Error(ErrorKind::DomainError, "SINR must be finite and >= 0");
  }
}

// (1+eta)^{-total} sum_{l<r} C(total, l) eta^l in log space.
double binomial_tail(double eta, int total, int r) {
  if (!(eta > 0.0)) return 1.0;
  const double log_eta = std::log(eta);
  const double log_base = -total * std::log1p(eta);
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(static_cast<std::size_t>(r));
  for (int l = 0; l < r; ++l) {
    logs[static_cast<std::size_t>(l)] = std::lgamma(total + 1.0) - std::lgamma(l + 1.0) -
                                        std::lgamma(total - l + 1.0) + l * log_eta + log_base;
    hi = std::max(hi, logs[static_cast<std::size_t>(l)]);
  }
  double sum = 0.0;
  for (double v : logs) sum += std::exp(v - hi);
  return std::min(1.0, std::exp(hi + std::log(sum)));
}

double p2_density(double u, const Dimensions& dims) {
  return complex_beta_pdf(u, dims.training_dof() + dims.signal_rank, dims.residual_dim());
}

// Survival of CF_{r, M}(u SINR) at x.
double conditional_sf(double x, double u, const Dimensions& dims, double sinr) {
  return complex_f_sf(x, ComplexDof{dims.signal_rank, dims.training_dof(), u * sinr});
}

double lmpid_integral(double eta, const Dimensions& dims, double sinr) {
  const double a = dims.lmpid_scale();
  if (eta > a) return 0.0;
  if (eta < -1.0) return 1.0;
  auto integrand = [&](double u) {
    return conditional_sf((u + eta) / (u * a - eta), u, dims, sinr) * p2_density(u, dims);
  };
  if (eta > 0.0) {
    // p2 <= eta/a cannot exceed the threshold
    return std::clamp(integrate(integrand, eta / a, 1.0), 0.0, 1.0);
  }
  // p2 < -eta always exceeds the threshold
  const double certain =
      eta < 0.0 ? complex_beta_cdf(-eta, ComplexDof{dims.training_dof() + dims.signal_rank,
                                                    dims.residual_dim(), 0.0})
                : 0.0;
  return std::clamp(certain + integrate(integrand, -eta, 1.0), 0.0, 1.0);
}

// LMPID threshold for m = N mapped to the ED scale; nullopt means the
// statistic never exceeds eta.
std::optional<double> full_lmpid_to_ed(double eta, const Dimensions& dims) {
  const double a = static_cast<double>(dims.snapshots - dims.signal_rank + 1) / dims.signal_rank;
  if (eta >= a) return std::nullopt;
  if (eta < -1.0) return -1.0;
  return (1.0 + eta) / (a - eta);
}

}  // namespace

double pfa_glrt(double eta, const Dimensions& dims) {
  require_split(dims);
  const int r = dims.signal_rank;
  return binomial_tail(eta, r + dims.training_dof() - 1, r);
}

double pd_glrt(double eta, const Dimensions& dims, double sinr) {
  require_split(dims);
  require_sinr(sinr);
  if (!(eta > 0.0)) return 1.0;
  const double v = integrate(
      [&](double u) { return conditional_sf(eta, u, dims, sinr) * p2_density(u, dims); }, 0.0, 1.0);
  return std::clamp(v, 0.0, 1.0);
}

double pfa_2sglrt(double eta, const Dimensions& dims) { return pd_2sglrt(eta, dims, 0.0); }

double pd_2sglrt(double eta, const Dimensions& dims, double sinr) {
  require_split(dims);
  require_sinr(sinr);
  if (!(eta > 0.0)) return 1.0;
  const double v = integrate(
      [&](double u) { return conditional_sf(eta * u, u, dims, sinr) * p2_density(u, dims); }, 0.0,
      1.0);
  return std::clamp(v, 0.0, 1.0);
}

double pfa_lmpid(double eta, const Dimensions& dims) { return pd_lmpid(eta, dims, 0.0); }

double pd_lmpid(double eta, const Dimensions& dims, double sinr) {
  require_split(dims);
  require_sinr(sinr);
  return lmpid_integral(eta, dims, sinr);
}

double pfa_ed(double eta, const Dimensions& dims) {
  require_full(dims);
  return binomial_tail(eta, dims.snapshots, dims.signal_rank);
}

double pd_ed(double eta, const Dimensions& dims, double sinr) {
  require_full(dims);
  require_sinr(sinr);
  if (!(eta > 0.0)) return 1.0;
  return complex_f_sf(eta, ComplexDof{dims.signal_rank, dims.snapshots - dims.signal_rank + 1, sinr});
}

double pfa(const DetectorKind& kind, double eta, const Dimensions& dims) {
  dims.validate();
  if (kind.tag == DetectorTag::Mpid) {
    throw Error(ErrorKind::InvalidArgument, "the MPID has no closed-form Pfa");
  }
  if (dims.full_subspace()) {
    if (kind.tag == DetectorTag::Lmpid) {
      const auto ed = full_lmpid_to_ed(eta, dims);
      return ed ? pfa_ed(*ed, dims) : 0.0;
    }
    return pfa_ed(eta, dims);
  }
  switch (kind.tag) {
    case DetectorTag::Glrt: return pfa_glrt(eta, dims);
    case DetectorTag::TwoStepGlrt: return pfa_2sglrt(eta, dims);
    case DetectorTag::Lmpid: return pfa_lmpid(eta, dims);
    default: throw Error(ErrorKind::DomainError, "ED requires m = N");
  }
}

double pd(const DetectorKind& kind, double eta, const Dimensions& dims, double sinr) {
  dims.validate();
  if (kind.tag == DetectorTag::Mpid) {
    throw Error(ErrorKind::InvalidArgument, "the MPID has no closed-form Pd");
  }
  if (dims.full_subspace()) {
    if (kind.tag == DetectorTag::Lmpid) {
      const auto ed = full_lmpid_to_ed(eta, dims);
      return ed ? pd_ed(*ed, dims, sinr) : 0.0;
    }
    return pd_ed(eta, dims, sinr);
  }
  switch (kind.tag) {
    case DetectorTag::Glrt: return pd_glrt(eta, dims, sinr);
    case DetectorTag::TwoStepGlrt: return pd_2sglrt(eta, dims, sinr);
    case DetectorTag::Lmpid: return pd_lmpid(eta, dims, sinr);
    default: throw Error(ErrorKind::DomainError, "ED requires m = N");
  }
}

std::pair<double, double> threshold_support(const DetectorKind& kind, const Dimensions& dims) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (kind.tag == DetectorTag::Lmpid) {
    const double a = dims.full_subspace()
                         ? static_cast<double>(dims.snapshots - dims.signal_rank + 1) / dims.signal_rank
                         : dims.lmpid_scale();
    return {-1.0, a};
  }
  return {0.0, kInf};
}

double invert_threshold(const DetectorKind& kind, const Dimensions& dims, double target_pfa) {
  if (!(target_pfa > 0.0 && target_pfa <= 1.0)) {
    throw Error(ErrorKind::NotBracketable, "target Pfa must lie in (0, 1]");
  }
  const auto [lower, upper] = threshold_support(kind, dims);
  if (target_pfa == 1.0) return lower;

  double lo = lower;
  double hi;
  if (std::isinf(upper)) {
    hi = 1.0;
    while (pfa(kind, hi, dims) > target_pfa) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw Error(ErrorKind::NotBracketable, "target Pfa is not reachable");
    }
  } else {
    hi = upper;
  }

  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double value = pfa(kind, mid, dims);
    if (std::abs(value - target_pfa) <= 1e-10 * target_pfa) return mid;
    if (value > target_pfa) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) {
      return mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace invdet
