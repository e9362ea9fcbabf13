#include "invdet/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace invdet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPoissonTail = 1e-12;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void require_unit_interval(double x, const char* what) {
  if (!(x > 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::DomainError, std::string(what) + " must lie in (0, 1]");
  }
}

// log of sum_{l=lo}^{hi} C(total, l) s^l c^{total-l}
double log_binomial_range(int total, int lo, int hi, double log_s, double log_c) {
  double acc = kNegInf;
  for (int l = lo; l <= hi; ++l) {
    const double ls = l == 0 ? 0.0 : l * log_s;
    const double lc = total - l == 0 ? 0.0 : (total - l) * log_c;
    acc = log_add(acc, log_binomial(total, l) + ls + lc);
  }
  return acc;
}

// Central SF and CDF of CF_{n,m} at x > 0 as the two complementary pieces of
// a binomial expansion in s = x/(1+x), c = 1/(1+x).
double central_f_sf(double x, int n, int m) {
  const double log_s = std::log(x) - std::log1p(x);
  const double log_c = -std::log1p(x);
  return std::exp(log_binomial_range(n + m - 1, 0, n - 1, log_s, log_c));
}

double central_f_cdf(double x, int n, int m) {
  const double log_s = std::log(x) - std::log1p(x);
  const double log_c = -std::log1p(x);
  return std::exp(log_binomial_range(n + m - 1, n, n + m - 1, log_s, log_c));
}

// Poisson(delta2) mixture over the numerator dof. `cdf_side` selects which
// tail is accumulated; each component is updated with the recurrence
//   SF(n+1) = SF(n) + c^m s^n Gamma(n+m) / (Gamma(m) Gamma(n+1)).
double noncentral_f(double x, const ComplexDof& dof, bool cdf_side) {
  const double d2 = dof.delta2;
  const double spread = std::sqrt(d2 + 1.0);
  const int j_lo = static_cast<int>(std::max(0.0, std::floor(d2 - 12.0 * spread - 20.0)));
  const int j_cap = static_cast<int>(std::ceil(d2 + 40.0 * spread + 60.0));

  const double log_s = std::log(x) - std::log1p(x);
  const double log_c = -std::log1p(x);
  const double log_d2 = std::log(d2);
  const int m = dof.m;

  int nj = dof.n + j_lo;
  double sf = cdf_side ? 0.0 : central_f_sf(x, nj, m);
  double cdf = cdf_side ? central_f_cdf(x, nj, m) : 0.0;
  // log of c^m s^nj Gamma(nj+m)/(Gamma(m)Gamma(nj+1))
  double log_term = m * log_c + nj * log_s + std::lgamma(nj + m) - std::lgamma(m) -
                    std::lgamma(nj + 1.0);
  double log_w = -d2 + j_lo * log_d2 - std::lgamma(j_lo + 1.0);

  double total = 0.0;
  double weight = 0.0;
  for (int j = j_lo; j <= j_cap; ++j) {
    const double w = std::exp(log_w);
    total += w * (cdf_side ? cdf : sf);
    weight += w;
    if (j >= d2 && 1.0 - weight < kPoissonTail) break;
    const double term = std::exp(log_term);
    sf = std::min(1.0, sf + term);
    cdf = std::max(0.0, cdf - term);
    log_term += log_s + std::log(static_cast<double>(nj + m) / (nj + 1.0));
    ++nj;
    log_w += log_d2 - std::log(j + 1.0);
  }
  return std::clamp(total, 0.0, 1.0);
}

// log sum_{k=0}^{terms} C(terms, k) (r-1)!/(r+k-1)! w^k, lgamma based.
double log_signal_series(int terms, int r, double w) {
  if (w <= 0.0) return 0.0;
  const double log_w = std::log(w);
  double acc = kNegInf;
  for (int k = 0; k <= terms; ++k) {
    acc = log_add(acc, log_binomial(terms, k) + std::lgamma(static_cast<double>(r)) -
                           std::lgamma(static_cast<double>(r + k)) + k * log_w);
  }
  return acc;
}

}  // namespace

void ComplexDof::validate() const {
  if (n < 1 || m < 1) throw Error(ErrorKind::DomainError, "complex dof must be >= 1");
  if (!(delta2 >= 0.0) || !std::isfinite(delta2)) {
    throw Error(ErrorKind::DomainError, "noncentrality must be finite and >= 0");
  }
}

double log_complex_beta_pdf(double x, int n, int m) {
  require_unit_interval(x, "beta argument");
  if (n < 1 || m < 1) throw Error(ErrorKind::DomainError, "complex dof must be >= 1");
  const double log_const = std::lgamma(static_cast<double>(n + m)) -
                           std::lgamma(static_cast<double>(n)) - std::lgamma(static_cast<double>(m));
  double tail = 0.0;
  if (m > 1) tail = x == 1.0 ? kNegInf : (m - 1) * std::log1p(-x);
  return log_const + (n - 1) * std::log(x) + tail;
}

double complex_beta_pdf(double x, int n, int m) { return std::exp(log_complex_beta_pdf(x, n, m)); }

double complex_beta_cdf(double x, const ComplexDof& dof) {
  dof.validate();
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return complex_f_sf((1.0 - x) / x, ComplexDof{dof.m, dof.n, dof.delta2});
}

double complex_f_cdf(double x, const ComplexDof& dof) {
  dof.validate();
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (dof.delta2 == 0.0) return central_f_cdf(x, dof.n, dof.m);
  return noncentral_f(x, dof, true);
}

double complex_f_sf(double x, const ComplexDof& dof) {
  dof.validate();
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (dof.delta2 == 0.0) return central_f_sf(x, dof.n, dof.m);
  return noncentral_f(x, dof, false);
}

double joint_pdf_p1_p2(double x, double y, const Dimensions& dims, double sinr,
                       Hypothesis hypothesis) {
  dims.validate();
  if (dims.full_subspace()) {
    throw Error(ErrorKind::DomainError, "joint (p1, p2) law requires m < N");
  }
  require_unit_interval(x, "p1");
  require_unit_interval(y, "p2");
  if (!(sinr >= 0.0)) throw Error(ErrorKind::DomainError, "SINR must be >= 0");
  const int big_m = dims.training_dof();
  const int r = dims.signal_rank;
  const double s = hypothesis == Hypothesis::H1 ? sinr : 0.0;
  const double log_density = log_complex_beta_pdf(x, big_m, r) +
                             log_complex_beta_pdf(y, big_m + r, dims.residual_dim()) - s * x * y +
                             log_signal_series(big_m, r, s * y * (1.0 - x));
  return std::exp(log_density);
}

double pdf_p3(double x, const Dimensions& dims, double sinr, Hypothesis hypothesis) {
  dims.validate();
  if (!dims.full_subspace()) throw Error(ErrorKind::DomainError, "p3 law requires m = N");
  require_unit_interval(x, "p3");
  if (!(sinr >= 0.0)) throw Error(ErrorKind::DomainError, "SINR must be >= 0");
  const int k_dof = dims.snapshots - dims.signal_rank + 1;
  const double s = hypothesis == Hypothesis::H1 ? sinr : 0.0;
  return std::exp(log_complex_beta_pdf(x, k_dof, dims.signal_rank) - s * x +
                  log_signal_series(k_dof, dims.signal_rank, s * (1.0 - x)));
}

ComplexVector sample_complex_normal(const ComplexVector& mean, const HermitianMatrix& cov,
                                    RandomStream& rng) {
  if (mean.size() != cov.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "mean and covariance sizes differ");
  }
  Eigen::LLT<ComplexMatrix> llt(cov.dense());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "covariance is not positive definite");
  }
  const ComplexMatrix l = llt.matrixL();
  return mean + l * rng.complex_normal_vector(mean.size());
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "KS statistic needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_critical_value_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::InvalidArgument, "KS statistic needs samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_two_sample_critical_value_1pct(std::size_t n, std::size_t m) {
  const double a = static_cast<double>(n);
  const double b = static_cast<double>(m);
  return 1.63 * std::sqrt((a + b) / (a * b));
}

}  // namespace invdet
