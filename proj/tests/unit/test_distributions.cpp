#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/non_central_beta.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "helpers.hpp"
#include "invdet/detectors.hpp"
#include "invdet/distributions.hpp"
#include "invdet/quadrature.hpp"

using namespace invdet;

namespace {

// CF_{n,m}(delta2) <= x  <=>  real Beta(n, m; 2 delta2) <= x / (1 + x).
double boost_f_cdf(double x, int n, int m, double delta2) {
  const double b = x / (1.0 + x);
  if (delta2 == 0.0) return boost::math::ibeta(n, m, b);
  return boost::math::cdf(boost::math::non_central_beta(n, m, 2.0 * delta2), b);
}

double binomial(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

}  // namespace

TEST_CASE("complex beta density") {
  CHECK(complex_beta_pdf(0.3, 1, 1) == doctest::Approx(1.0));
  CHECK(complex_beta_pdf(0.9, 1, 1) == doctest::Approx(1.0));
  CHECK(complex_beta_pdf(0.5, 2, 3) == doctest::Approx(1.5).epsilon(1e-14));
  for (int n = 1; n <= 6; ++n) {
    for (int m = 1; m <= 6; ++m) {
      const QuadratureRule& rule = gauss_legendre_unit(512);
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * complex_beta_pdf(rule.nodes[i], n, m);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(complex_beta_pdf(0.37, n, m) ==
            doctest::Approx(boost::math::pdf(boost::math::beta_distribution<>(n, m), 0.37))
                .epsilon(1e-12));
    }
  }
  CHECK_THROWS_KIND(complex_beta_pdf(0.0, 2, 2), ErrorKind::DomainError);
  CHECK_THROWS_KIND(complex_beta_pdf(1.5, 2, 2), ErrorKind::DomainError);
}

TEST_CASE("central complex F") {
  CHECK(complex_f_cdf(0.0, {3, 4, 0.0}) == 0.0);
  CHECK(complex_f_cdf(-1.0, {3, 4, 0.0}) == 0.0);
  CHECK(complex_f_sf(-1.0, {3, 4, 0.0}) == 1.0);
  for (int m : {1, 4, 9, 20}) {
    for (double x : {0.01, 0.5, 3.0, 40.0}) {
      CHECK(complex_f_cdf(x, {1, m, 0.0}) ==
            doctest::Approx(1.0 - std::pow(1.0 + x, -m)).epsilon(1e-12));
    }
  }
  // the finite sum for r <= 6, M <= 20
  double worst = 0.0;
  for (int r = 1; r <= 6; ++r) {
    for (int big_m = 1; big_m <= 20; ++big_m) {
      for (double eta : {0.0, 0.05, 0.3, 1.0, 2.5, 10.0, 100.0}) {
        double sum = 0.0;
        for (int l = 0; l < r; ++l) sum += binomial(r + big_m - 1, l) * std::pow(eta, l);
        const double expected = std::pow(1.0 + eta, -(r + big_m - 1)) * sum;
        worst = std::max(worst, std::abs(complex_f_sf(eta, {r, big_m, 0.0}) - expected));
        CHECK(complex_f_cdf(eta, {r, big_m, 0.0}) ==
              doctest::Approx(boost_f_cdf(eta, r, big_m, 0.0)).epsilon(1e-11));
      }
    }
  }
  CHECK(worst <= 1e-12);
  CHECK(complex_f_cdf(1e300, {3, 4, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("noncentral complex F") {
  SUBCASE("zero noncentrality matches the central path") {
    // the noncentral mixture with delta2 = 0 reduces to its first term
    for (double x : {0.1, 1.0, 7.0}) {
      const double central = complex_f_cdf(x, {2, 9, 0.0});
      const double tiny = complex_f_cdf(x, {2, 9, 1e-300});
      CHECK(std::abs(central - tiny) <= 1e-12);
    }
  }
  SUBCASE("Boost oracle") {
    for (int n : {1, 2, 4}) {
      for (int m : {3, 9, 13}) {
        for (double delta2 : {0.5, 5.0, 40.0, 400.0}) {
          for (double x : {0.05, 0.7, 3.0, 25.0}) {
            const double ours = complex_f_cdf(x, {n, m, delta2});
            const double ref = boost_f_cdf(x, n, m, delta2);
            CHECK(std::abs(ours - ref) <= 1e-10);
            CHECK(complex_f_sf(x, {n, m, delta2}) == doctest::Approx(1.0 - ours).epsilon(1e-12));
          }
        }
      }
    }
  }
  SUBCASE("beta relation") {
    // P(p <= x) for p ~ Cbeta_{n,m}(delta) is P(CF_{m,n}(delta) >= (1-x)/x)
    const ComplexDof dof{9, 2, 3.0};
    for (double x : {0.2, 0.5, 0.9}) {
      CHECK(complex_beta_cdf(x, dof) ==
            doctest::Approx(complex_f_sf((1.0 - x) / x, {2, 9, 3.0})).epsilon(1e-12));
    }
    CHECK(complex_beta_cdf(1.0, dof) == doctest::Approx(1.0));
  }
  CHECK_THROWS_KIND(ComplexDof({0, 2, 0.0}).validate(), ErrorKind::DomainError);
  CHECK_THROWS_KIND(ComplexDof({1, 2, -1.0}).validate(), ErrorKind::DomainError);
}

TEST_CASE("joint density of the maximal invariant") {
  const Dimensions d{8, 12, 2, 4};
  const int big_m = d.training_dof();
  SUBCASE("zero SINR factorizes") {
    for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
      const double f = joint_pdf_p1_p2(0.3, 0.6, d, 0.0, h);
      const double expected = complex_beta_pdf(0.3, big_m, d.signal_rank) *
                              complex_beta_pdf(0.6, big_m + d.signal_rank, d.residual_dim());
      CHECK(f == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(joint_pdf_p1_p2(0.3, 0.6, d, 10.0, Hypothesis::H0) ==
          doctest::Approx(joint_pdf_p1_p2(0.3, 0.6, d, 0.0, Hypothesis::H0)));
  }
  SUBCASE("likelihood ratio is the MPID") {
    RandomStream rng(61);
    for (int rep = 0; rep < 50; ++rep) {
      const double x = rng.uniform(0.01, 1.0), y = rng.uniform(0.01, 1.0);
      const double ratio = joint_pdf_p1_p2(x, y, d, 3.0, Hypothesis::H1) /
                           joint_pdf_p1_p2(x, y, d, 3.0, Hypothesis::H0);
      CHECK(ratio == doctest::Approx(
                         mpid_statistic(MaximalInvariant::from_probabilities(x, y), d, 3.0))
                         .epsilon(1e-10));
    }
  }
  SUBCASE("p3 density") {
    const Dimensions full{6, 12, 2, 4};
    CHECK(pdf_p3(0.4, full, 0.0, Hypothesis::H1) ==
          doctest::Approx(complex_beta_pdf(0.4, 11, 2)).epsilon(1e-12));
    CHECK(pdf_p3(0.4, full, 5.0, Hypothesis::H0) == doctest::Approx(pdf_p3(0.4, full, 0.0, Hypothesis::H0)));
    const double total = integrate([&](double x) { return pdf_p3(x, full, 5.0, Hypothesis::H1); }, 0.0, 1.0);
    CHECK(std::abs(total - 1.0) <= 1e-8);
  }
  CHECK_THROWS_KIND(joint_pdf_p1_p2(0.0, 0.5, d, 1.0, Hypothesis::H1), ErrorKind::DomainError);
  CHECK_THROWS_KIND(joint_pdf_p1_p2(0.5, 0.5, Dimensions{6, 12, 2, 4}, 1.0, Hypothesis::H1),
                    ErrorKind::DomainError);
  CHECK_THROWS_KIND(pdf_p3(0.5, d, 1.0, Hypothesis::H1), ErrorKind::DomainError);
}

TEST_CASE("complex normal sampler") {
  RandomStream rng(62);
  SUBCASE("identity covariance") {
    const int draws = 100000;
    double re2 = 0.0, im2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const Complex c = sample_complex_normal(ComplexVector::Zero(1), HermitianMatrix::identity(1), rng)(0);
      re2 += c.real() * c.real();
      im2 += c.imag() * c.imag();
    }
    CHECK(std::abs(re2 / draws - 0.5) < 5.0 * 0.5 * std::sqrt(2.0 / draws));
    CHECK(std::abs(im2 / draws - 0.5) < 5.0 * 0.5 * std::sqrt(2.0 / draws));
  }
  SUBCASE("sample covariance") {
    const HermitianMatrix cov = testing::random_pd(4, rng);
    const ComplexVector mean = rng.complex_normal_vector(4);
    ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      const ComplexVector v = sample_complex_normal(mean, cov, rng) - mean;
      acc += v * v.adjoint();
    }
    acc /= static_cast<double>(draws);
    CHECK((acc - cov.dense()).norm() <= 0.05 * cov.dense().norm());
  }
  SUBCASE("guards and reproducibility") {
    CHECK_THROWS_KIND(sample_complex_normal(ComplexVector::Zero(2), HermitianMatrix::zero(2), rng),
                      ErrorKind::NotPositiveDefinite);
    RandomStream a(5), b(5);
    const HermitianMatrix cov = HermitianMatrix::identity(3);
    CHECK(testing::max_abs(sample_complex_normal(ComplexVector::Zero(3), cov, a) -
                           sample_complex_normal(ComplexVector::Zero(3), cov, b)) == 0.0);
  }
}

TEST_CASE("Kolmogorov-Smirnov helpers") {
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_statistic(std::vector<double>(100, 0.3), uniform) >= 0.5);
  CHECK(ks_statistic({0.5}, uniform) == doctest::Approx(0.5));
  CHECK_THROWS_KIND(ks_statistic({}, uniform), ErrorKind::InvalidArgument);

  int failures = 0;
  const std::size_t n = 10000;
  for (std::uint64_t s = 0; s < 20; ++s) {
    RandomStream rng(1000 + s);
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform();
    failures += ks_statistic(x, uniform) > ks_critical_value_1pct(n);
  }
  CHECK(failures <= 1);

  CHECK(ks_two_sample_statistic({0.1, 0.2}, {0.1, 0.2}) == 0.0);
  CHECK(ks_two_sample_statistic({0.1, 0.2}, {0.3, 0.4}) == doctest::Approx(1.0));
  CHECK(ks_two_sample_critical_value_1pct(100, 100) == doctest::Approx(1.63 * std::sqrt(0.02)));
}
