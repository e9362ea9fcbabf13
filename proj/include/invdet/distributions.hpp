#pragma once

// Complex-dof distribution family. Conventions:
//   Cchi2_n    sum of n squared moduli of standard complex normals, i.e.
//              Gamma(shape n, scale 1)
//   CF_{n,m}   plain ratio Cchi2_n(delta) / Cchi2_m, numerator dof n
//   Cbeta_{n,m} 1 / (1 + CF_{m,n}), density proportional to x^{n-1}(1-x)^{m-1}
// Noncentrality is always passed as delta^2.

#include <functional>
#include <vector>

#include "invdet/dimensions.hpp"
#include "invdet/linalg.hpp"
#include "invdet/random.hpp"
#include "invdet/scenario.hpp"

namespace invdet {

struct ComplexDof {
  int n = 1;
  int m = 1;
  double delta2 = 0.0;

  /// Throws DomainError unless n, m >= 1 and delta2 >= 0.
  void validate() const;
};

/// log of the central complex beta density; -inf where the density is 0.
double log_complex_beta_pdf(double x, int n, int m);

/// Gamma(n+m)/(Gamma(n)Gamma(m)) x^{n-1}(1-x)^{m-1} on (0, 1].
double complex_beta_pdf(double x, int n, int m);

/// P(p <= x) for p ~ Cbeta_{n,m}(delta).
double complex_beta_cdf(double x, const ComplexDof& dof);

/// P(F <= x) and P(F > x) for F ~ CF_{n,m}(delta). Zero / one for x <= 0.
double complex_f_cdf(double x, const ComplexDof& dof);
double complex_f_sf(double x, const ComplexDof& dof);

/// Joint density of (p1, p2) for m < N. Under H0 the sinr argument is ignored.
double joint_pdf_p1_p2(double x, double y, const Dimensions& dims, double sinr,
                       Hypothesis hypothesis);

/// Density of p3 for m = N.
double pdf_p3(double x, const Dimensions& dims, double sinr, Hypothesis hypothesis);

/// Circular complex Gaussian draw with the given mean and covariance.
/// Throws NotPositiveDefinite.
ComplexVector sample_complex_normal(const ComplexVector& mean, const HermitianMatrix& cov,
                                    RandomStream& rng);

/// Kolmogorov-Smirnov distance between the empirical CDF of the samples and cdf.
/// Throws InvalidArgument for an empty sample.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic one-sample critical value at the 1% level, 1.63 / sqrt(n).
double ks_critical_value_1pct(std::size_t n);

/// Two-sample Kolmogorov-Smirnov distance between empirical CDFs.
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);

/// 1.63 sqrt((n + m) / (n m)).
double ks_two_sample_critical_value_1pct(std::size_t n, std::size_t m);

}  // namespace invdet
