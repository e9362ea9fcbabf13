#include <numbers>

#include "helpers.hpp"
#include "invdet/canonical.hpp"
#include "invdet/scenario.hpp"

using namespace invdet;
using testing::identity;
using testing::max_abs;
using testing::random_pd;

namespace {

// Scenario with random subspaces and covariance.
Scenario random_scenario(const Dimensions& d, RandomStream& rng) {
  return make_scenario(d, rng.complex_normal_matrix(d.channels, d.signal_rank),
                       rng.complex_normal_matrix(d.channels, d.jammer_rank),
                       random_pd(d.channels, rng));
}

}  // namespace

TEST_CASE("clutter covariance") {
  SUBCASE("no clutter") {
    const HermitianMatrix m = build_clutter_covariance(5, 2.0, 0.0, 0.95);
    CHECK(max_abs(m.dense() - 2.0 * identity(5)) == 0.0);
  }
  SUBCASE("two channels at 30 dB") {
    const HermitianMatrix m = build_clutter_covariance(2, 1.0, 1000.0, 0.95);
    CHECK(m(0, 0).real() == doctest::Approx(1001.0));
    CHECK(m(1, 1).real() == doctest::Approx(1001.0));
    CHECK(m(0, 1).real() == doctest::Approx(950.0));
    CHECK(m(1, 0).real() == doctest::Approx(950.0));
  }
  SUBCASE("Toeplitz and positive definite") {
    for (int n : {2, 8, 16}) {
      for (double rho : {0.0, 0.5, 0.95, 0.99}) {
        const HermitianMatrix m = build_clutter_covariance(n, 1.0, 1000.0, rho);
        CHECK(m.is_positive_definite());
        for (int i = 1; i < n; ++i)
          for (int j = 1; j < n; ++j) CHECK(m(i, j) == m(i - 1, j - 1));
      }
    }
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_KIND(build_clutter_covariance(4, 0.0, 1.0, 0.5), ErrorKind::InvalidArgument);
    CHECK_THROWS_KIND(build_clutter_covariance(4, 1.0, 1.0, 1.0), ErrorKind::InvalidArgument);
  }
}

TEST_CASE("steering subspace") {
  SUBCASE("zero Doppler") {
    const ComplexMatrix a = build_steering_subspace(4, {0.0});
    CHECK(max_abs(a - ComplexMatrix::Constant(4, 1, 0.5)) < 1e-15);
  }
  SUBCASE("half-bin Doppler alternates sign") {
    const ComplexMatrix a = build_steering_subspace(2, {-0.5});
    CHECK(std::abs(a(0, 0) - 1.0 / std::numbers::sqrt2) < 1e-15);
    CHECK(std::abs(a(1, 0) + 1.0 / std::numbers::sqrt2) < 1e-15);
  }
  SUBCASE("distinct frequencies give full rank") {
    const ComplexMatrix a = build_steering_subspace(8, {0.0, 0.1, 0.2});
    const ComplexMatrix gram = a.adjoint() * a;
    CHECK(std::isfinite(condition_number(gram)));
    CHECK(condition_number(gram) < 1e6);
    CHECK(qr_decompose(a).r.rows() == 3);
  }
  SUBCASE("duplicates and range") {
    CHECK_THROWS_KIND(build_steering_subspace(8, {0.1, 0.1}), ErrorKind::DuplicateFrequency);
    CHECK_THROWS_KIND(build_steering_subspace(8, {0.5}), ErrorKind::DomainError);
  }
}

TEST_CASE("scenario validation") {
  const Dimensions d{8, 12, 2, 4};
  const auto h = build_steering_subspace(8, {0.0, 0.05});
  const auto j = build_steering_subspace(8, {0.2, -0.2, 0.3, -0.3});
  CHECK_NOTHROW(make_scenario(d, h, j, HermitianMatrix::identity(8)));
  CHECK_THROWS_KIND(make_scenario(d, h, h.leftCols(1) * ComplexMatrix::Ones(1, 4),
                                  HermitianMatrix::identity(8)),
                    ErrorKind::RankDeficient);
  ComplexMatrix bad = identity(8);
  bad(3, 3) = -1.0;
  CHECK_THROWS_KIND(make_scenario(d, h, j, HermitianMatrix(bad)), ErrorKind::NotPositiveDefinite);
  CHECK_THROWS_KIND(make_scenario(Dimensions{8, 12, 2, 7}, h, j, HermitianMatrix::identity(8)),
                    ErrorKind::InvalidArgument);
  CHECK_THROWS_KIND(make_scenario(Dimensions{8, 7, 2, 4}, h, j, HermitianMatrix::identity(8)),
                    ErrorKind::InvalidArgument);
}

TEST_CASE("doppler scenario defaults") {
  DopplerScenarioSpec spec;
  spec.dims = {8, 12, 2, 4};
  const Scenario s = build_doppler_scenario(spec);
  CHECK(s.clutter_power == doctest::Approx(1000.0));
  CHECK(s.covariance(0, 1).real() == doctest::Approx(950.0));
  spec.jammer_frequencies = {0.2};
  CHECK_THROWS_KIND(build_doppler_scenario(spec), ErrorKind::DimensionMismatch);
}

TEST_CASE("compute_sinr") {
  RandomStream rng(21);
  const Dimensions d{6, 10, 2, 2};
  SUBCASE("zero theta gives zero") {
    const CanonicalForm cf = canonicalize(random_scenario(d, rng));
    CHECK(compute_sinr(cf, ComplexVector::Zero(2)) == 0.0);
  }
  SUBCASE("identity covariance gives the squared norm") {
    const Scenario s = make_scenario(d, rng.complex_normal_matrix(6, 2),
                                     rng.complex_normal_matrix(6, 2), HermitianMatrix::identity(6));
    const CanonicalForm cf = canonicalize(s);
    const ComplexVector theta = rng.complex_normal_vector(2);
    CHECK(compute_sinr(cf, theta) == doctest::Approx(theta.squaredNorm()).epsilon(1e-12));
  }
  SUBCASE("phase invariance") {
    const CanonicalForm cf = canonicalize(random_scenario(d, rng));
    const ComplexVector theta = rng.complex_normal_vector(2);
    const double base = compute_sinr(cf, theta);
    CHECK(base > 0.0);
    CHECK(compute_sinr(cf, std::polar(1.0, 0.7) * theta) ==
          doctest::Approx(base).epsilon(1e-12));
  }
  SUBCASE("full subspace uses M22") {
    const Dimensions full{4, 6, 2, 2};
    const CanonicalForm cf = canonicalize(random_scenario(full, rng));
    const ComplexVector theta = rng.complex_normal_vector(2);
    const ComplexMatrix m22 = cf.covariance_block(2, 2);
    const double direct = (theta.adjoint() * m22.inverse() * theta)(0).real();
    CHECK(compute_sinr(cf, theta) == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK(db_to_linear(16.0) == doctest::Approx(39.81).epsilon(1e-3));
}

TEST_CASE("scale_signal_to_sinr") {
  RandomStream rng(22);
  const Dimensions d{8, 12, 2, 4};
  SUBCASE("target zero") {
    const CanonicalForm cf = canonicalize(random_scenario(d, rng));
    CHECK(scale_signal_to_sinr(cf, rng.complex_normal_vector(2), 0.0).norm() == 0.0);
  }
  SUBCASE("identity covariance and orthonormal subspace") {
    ComplexMatrix basis = identity(8);
    const Scenario s = make_scenario(d, basis.middleCols(4, 2), basis.leftCols(4),
                                     HermitianMatrix::identity(8));
    const CanonicalForm cf = canonicalize(s);
    ComplexVector dir(2);
    dir << 0.6, Complex(0.0, 0.8);
    CHECK(max_abs(scale_signal_to_sinr(cf, dir, 4.0) - 2.0 * dir) < 1e-12);
  }
  SUBCASE("round trip") {
    for (int rep = 0; rep < 10; ++rep) {
      const CanonicalForm cf = canonicalize(random_scenario(d, rng));
      const ComplexVector p = scale_signal_to_sinr(cf, rng.complex_normal_vector(2), 10.0);
      CHECK(target_sinr(cf, p) == doctest::Approx(10.0).epsilon(1e-10));
    }
  }
  SUBCASE("errors") {
    const CanonicalForm cf = canonicalize(random_scenario(d, rng));
    CHECK_THROWS_KIND(scale_signal_to_sinr(cf, ComplexVector::Zero(2), 1.0),
                      ErrorKind::ZeroDirection);
    CHECK_THROWS_KIND(scale_signal_to_sinr(cf, ComplexVector::Ones(3), 1.0),
                      ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("scale_jammer_to_inr") {
  RandomStream rng(23);
  const Dimensions d{8, 12, 2, 4};
  SUBCASE("minus infinity gives no jammer") {
    const Scenario s = random_scenario(d, rng);
    const CanonicalForm cf = canonicalize(s);
    CHECK(scale_jammer_to_inr(s, cf, ComplexVector::Ones(4),
                              -std::numeric_limits<double>::infinity())
              .norm() == 0.0);
  }
  SUBCASE("orthonormal jammer basis at 30 dB") {
    const ComplexMatrix basis = identity(8);
    const Scenario s = make_scenario(d, basis.middleCols(4, 2), basis.leftCols(4),
                                     HermitianMatrix::identity(8));
    const CanonicalForm cf = canonicalize(s);
    ComplexVector dir = ComplexVector::Zero(4);
    dir(1) = 1.0;
    CHECK(scale_jammer_to_inr(s, cf, dir, 30.0)(1).real() ==
          doctest::Approx(std::sqrt(1000.0)).epsilon(1e-12));
  }
  SUBCASE("round trip") {
    const Scenario s = random_scenario(d, rng);
    const CanonicalForm cf = canonicalize(s);
    const ComplexVector q = scale_jammer_to_inr(s, cf, rng.complex_normal_vector(4), 30.0);
    CHECK((cf.r_jammer() * q).squaredNorm() / s.noise_power ==
          doctest::Approx(1000.0).epsilon(1e-9));
    CHECK_THROWS_KIND(scale_jammer_to_inr(s, cf, ComplexVector::Zero(4), 30.0),
                      ErrorKind::ZeroDirection);
  }
}
