#include "invdet/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invdet/kernels/kernels.hpp"

namespace invdet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSelfCheckTolerance = 1e-9;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void require_split(const MaximalInvariant& inv) {
  if (!inv.split()) throw Error(ErrorKind::DomainError, "statistic requires m < N");
}

void self_check(double a, double b, const char* what) {
  if (std::abs(a - b) > kSelfCheckTolerance * std::max({1.0, std::abs(a), std::abs(b)})) {
    throw Error(ErrorKind::SelfCheckFailed, std::string(what) + " raw and invariant forms disagree");
  }
}

double full_lmpid_scale(const Dimensions& dims) {
  return static_cast<double>(dims.snapshots - dims.signal_rank + 1) / dims.signal_rank;
}

}  // namespace

DetectorKind DetectorKind::parse(std::string_view name) {
  if (name == "mpid") return mpid(0.0);
  if (name == "lmpid") return of(DetectorTag::Lmpid);
  if (name == "glrt") return of(DetectorTag::Glrt);
  if (name == "2s-glrt") return of(DetectorTag::TwoStepGlrt);
  if (name == "ed") return of(DetectorTag::Ed);
  throw Error(ErrorKind::InvalidArgument, "unknown detector '" + std::string(name) + "'");
}

std::string_view to_string(DetectorTag tag) noexcept {
  switch (tag) {
    case DetectorTag::Mpid: return "mpid";
    case DetectorTag::Lmpid: return "lmpid";
    case DetectorTag::Glrt: return "glrt";
    case DetectorTag::TwoStepGlrt: return "2s-glrt";
    case DetectorTag::Ed: return "ed";
  }
  return "unknown";
}

std::string DetectorKind::name() const { return std::string(to_string(tag)); }

double mpid_series(double p1, double p2, const Dimensions& dims, double sinr) {
  const int big_m = dims.training_dof();
  const int r = dims.signal_rank;
  const double w = sinr * p2 * (1.0 - p1);
  const double lead = -sinr * p1 * p2;
  if (w == 0.0) return std::exp(lead);
  const double log_w = std::log(std::abs(w));
  const bool alternating = w < 0.0;
  // t_k = t_{k-1} (M - k + 1) / (k (r + k - 1)) w
  double log_t = 0.0;
  double pos = 0.0;  // log of the k = 0 term
  double neg = kNegInf;
  for (int k = 1; k <= big_m; ++k) {
    log_t += std::log(static_cast<double>(big_m - k + 1) / (static_cast<double>(k) * (r + k - 1))) +
             log_w;
    if (alternating && (k % 2 == 1)) {
      neg = log_add(neg, log_t);
    } else {
      pos = log_add(pos, log_t);
    }
  }
  if (neg == kNegInf) return std::exp(lead + pos);
  return std::exp(lead + pos) - std::exp(lead + neg);
}

double mpid_statistic(const MaximalInvariant& inv, const Dimensions& dims, double sinr) {
  require_split(inv);
  if (!(inv.p1 > 0.0 && inv.p1 <= 1.0 && inv.p2 > 0.0 && inv.p2 <= 1.0)) {
    throw Error(ErrorKind::DomainError, "invariant outside (0, 1]");
  }
  if (!(sinr >= 0.0)) throw Error(ErrorKind::DomainError, "SINR must be >= 0");
  return mpid_series(inv.p1, inv.p2, dims, sinr);
}

double lmpid_statistic(const MaximalInvariant& inv, const Dimensions& dims) {
  require_split(inv);
  return dims.lmpid_scale() * inv.p2 * (1.0 - inv.p1) - inv.p1 * inv.p2;
}

double two_step_glrt_statistic(const MaximalInvariant& inv) {
  require_split(inv);
  return (1.0 - inv.p1) / (inv.p1 * inv.p2);
}

double projected_quadratic_form(const SufficientStatistic& stat, Index lead) {
  const HermitianMatrix a = hermitian_inv_sqrt(stat.scatter);
  const ComplexVector x = a.dense() * stat.z;
  if (lead == 0) return x.squaredNorm();
  const ComplexMatrix b = a.dense().leftCols(lead);  // S^{-1/2} E
  const ComplexVector coef = (b.adjoint() * b).ldlt().solve(b.adjoint() * x);
  return (x - b * coef).squaredNorm();
}

double glrt_raw(const SufficientStatistic& stat) {
  const Index t = stat.part.jammer;
  const Index m = t + stat.part.signal;
  return (1.0 + projected_quadratic_form(stat, t)) / (1.0 + projected_quadratic_form(stat, m));
}

double two_step_glrt_raw(const SufficientStatistic& stat) {
  const Index t = stat.part.jammer;
  const Index m = t + stat.part.signal;
  return projected_quadratic_form(stat, t) - projected_quadratic_form(stat, m);
}

double ed_raw(const SufficientStatistic& stat) {
  if (stat.part.residual != 0) throw Error(ErrorKind::DomainError, "ED requires m = N");
  return inverse_quadratic_form(stat.s_trailing(), stat.z_trailing());
}

double glrt_statistic(const SufficientStatistic& stat) {
  const MaximalInvariant inv = compute_maximal_invariant(stat);
  const double invariant_form = inv.split() ? 1.0 / inv.p1 : 1.0 / inv.p3;
  self_check(glrt_raw(stat), invariant_form, "GLRT");
  return invariant_form;
}

double ed_statistic(const SufficientStatistic& stat) {
  const MaximalInvariant inv = compute_maximal_invariant(stat);
  if (inv.split()) throw Error(ErrorKind::DomainError, "ED requires m = N");
  const double invariant_form = (1.0 - inv.p3) / inv.p3;
  self_check(ed_raw(stat), invariant_form, "ED");
  return invariant_form;
}

double threshold_statistic(const DetectorKind& kind, const MaximalInvariant& inv,
                           const Dimensions& dims) {
  if (!inv.split()) {
    const double ed = (1.0 - inv.p3) / inv.p3;
    switch (kind.tag) {
      case DetectorTag::Lmpid: return full_lmpid_scale(dims) * (1.0 - inv.p3) - inv.p3;
      case DetectorTag::Mpid:
        throw Error(ErrorKind::DomainError, "MPID requires m < N");
      default: return ed;
    }
  }
  switch (kind.tag) {
    case DetectorTag::Mpid: return mpid_statistic(inv, dims, kind.sinr);
    case DetectorTag::Lmpid: return lmpid_statistic(inv, dims);
    case DetectorTag::Glrt: return (1.0 - inv.p1) / inv.p1;
    case DetectorTag::TwoStepGlrt: return two_step_glrt_statistic(inv);
    case DetectorTag::Ed: throw Error(ErrorKind::DomainError, "ED requires m = N");
  }
  return 0.0;
}

void threshold_statistics(const DetectorKind& kind, const Dimensions& dims,
                          const std::vector<double>& p1, const std::vector<double>& p2,
                          std::vector<double>& out) {
  const std::size_t n = p1.size();
  out.resize(n);
  if (dims.full_subspace()) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = threshold_statistic(kind, MaximalInvariant::full_from_probability(p1[i]), dims);
    }
    return;
  }
  if (p2.size() != n) throw Error(ErrorKind::DimensionMismatch, "p1 and p2 lengths differ");
  switch (kind.tag) {
    case DetectorTag::Mpid:
      for (std::size_t i = 0; i < n; ++i) out[i] = mpid_series(p1[i], p2[i], dims, kind.sinr);
      return;
    case DetectorTag::Ed: throw Error(ErrorKind::DomainError, "ED requires m = N");
    case DetectorTag::Glrt:
      kernels::split_statistics(kernels::SplitStatistic::Glrt, p1.data(), p2.data(), n, 0.0,
                                out.data());
      return;
    case DetectorTag::TwoStepGlrt:
      kernels::split_statistics(kernels::SplitStatistic::TwoStepGlrt, p1.data(), p2.data(), n, 0.0,
                                out.data());
      return;
    case DetectorTag::Lmpid:
      kernels::split_statistics(kernels::SplitStatistic::Lmpid, p1.data(), p2.data(), n,
                                dims.lmpid_scale(), out.data());
      return;
  }
}

bool cmpid_direction_check(const Dimensions& dims, const std::vector<double>& sinr_grid) {
  constexpr int kPoints = 1000;
  const double p2_values[] = {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0};
  for (double sinr : sinr_grid) {
    if (!(sinr >= 0.0)) return false;
    for (double p2 : p2_values) {
      double previous = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= kPoints; ++i) {
        const double p1 = static_cast<double>(i) / kPoints;
        const double value = mpid_series(p1, p2, dims, sinr);
        if (value > previous * (1.0 + 1e-12)) return false;
        previous = value;
      }
    }
  }
  return true;
}

}  // namespace invdet
