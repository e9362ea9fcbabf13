#include "helpers.hpp"
#include "invdet/canonical.hpp"
#include "invdet/scenario.hpp"

using namespace invdet;
using testing::identity;
using testing::max_abs;
using testing::random_pd;

namespace {

Scenario random_scenario(const Dimensions& d, RandomStream& rng) {
  return make_scenario(d, rng.complex_normal_matrix(d.channels, d.signal_rank),
                       rng.complex_normal_matrix(d.channels, d.jammer_rank),
                       random_pd(d.channels, rng));
}

}  // namespace

TEST_CASE("already canonical subspaces give the identity rotation") {
  const Dimensions d{6, 8, 2, 3};
  const ComplexMatrix e = identity(6);
  const CanonicalForm cf =
      canonicalize(make_scenario(d, e.middleCols(3, 2), e.leftCols(3), HermitianMatrix::identity(6)));
  CHECK(max_abs(cf.rotation - identity(6)) < 1e-14);
  CHECK(max_abs(cf.r_factor - identity(5)) < 1e-14);
}

TEST_CASE("canonical form identities") {
  RandomStream rng(31);
  for (const Dimensions& d : {Dimensions{8, 12, 2, 4}, Dimensions{6, 9, 3, 1}, Dimensions{5, 7, 2, 3}}) {
    const Scenario s = random_scenario(d, rng);
    const CanonicalForm cf = canonicalize(s);
    const Index n = d.channels;
    CHECK((cf.rotation.adjoint() * cf.rotation - identity(n)).norm() < 1e-10);
    CHECK((cf.rotation * cf.rotation.adjoint() - identity(n)).norm() < 1e-10);

    ComplexMatrix selectors(n, d.subspace_rank());
    selectors << cf.jammer_selector(), cf.signal_selector();
    CHECK((cf.rotation * cf.q_factor - selectors).norm() < 1e-10);

    CHECK((cf.rotation * s.jammer_basis - cf.jammer_selector() * cf.r_jammer()).norm() < 1e-10);
    CHECK((cf.rotation * s.signal_basis - cf.jammer_selector() * cf.r_cross() -
           cf.signal_selector() * cf.r_signal())
              .norm() < 1e-10);
    CHECK(std::abs(cf.r_jammer().determinant()) > 0.0);
    CHECK(std::abs(cf.r_signal().determinant()) > 0.0);

    const ComplexMatrix m = cf.rotation * s.covariance.dense() * cf.rotation.adjoint();
    CHECK((cf.covariance.dense() - m).norm() < 1e-10 * m.norm());
    CHECK(max_abs(cf.covariance_block(2, 3) -
                  m.block(d.jammer_rank, d.subspace_rank(), d.signal_rank, d.residual_dim())) <
          1e-10 * m.norm());
  }
}

TEST_CASE("full subspace rotates onto the identity selectors") {
  RandomStream rng(32);
  const Dimensions d{5, 7, 2, 3};
  const CanonicalForm cf = canonicalize(random_scenario(d, rng));
  CHECK((cf.rotation * cf.q_factor - identity(5)).norm() < 1e-10);
  CHECK(cf.part.residual == 0);
}

TEST_CASE("nonzero target gives nonzero theta2") {
  RandomStream rng(33);
  const CanonicalForm cf = canonicalize(random_scenario(Dimensions{8, 12, 2, 4}, rng));
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexVector p = rng.complex_normal_vector(2);
    CHECK((cf.r_signal() * p).norm() > 0.0);
  }
}

TEST_CASE("transform_data") {
  RandomStream rng(34);
  const Dimensions d{6, 9, 2, 2};
  SUBCASE("identity rotation") {
    const ComplexMatrix e = identity(6);
    const CanonicalForm cf = canonicalize(
        make_scenario(d, e.middleCols(2, 2), e.leftCols(2), HermitianMatrix::identity(6)));
    const ComplexVector r = rng.complex_normal_vector(6);
    const ComplexMatrix sec = rng.complex_normal_matrix(6, 9);
    const SufficientStatistic st = transform_data(cf, r, sec);
    CHECK(max_abs(st.z - r) < 1e-14);
    CHECK(max_abs(st.scatter.dense() - sec * sec.adjoint()) < 1e-12);
    CHECK(st.scatter_positive_definite);
  }
  SUBCASE("zero secondary data is flagged") {
    const CanonicalForm cf = canonicalize(random_scenario(d, rng));
    const SufficientStatistic st =
        transform_data(cf, rng.complex_normal_vector(6), ComplexMatrix::Zero(6, 9));
    CHECK(max_abs(st.scatter.dense()) == 0.0);
    CHECK_FALSE(st.scatter_positive_definite);
  }
  SUBCASE("norms are preserved") {
    const CanonicalForm cf = canonicalize(random_scenario(d, rng));
    const ComplexVector r = rng.complex_normal_vector(6);
    const ComplexMatrix sec = rng.complex_normal_matrix(6, 9);
    const SufficientStatistic st = transform_data(cf, r, sec);
    CHECK(st.z.norm() == doctest::Approx(r.norm()).epsilon(1e-12));
    CHECK(st.scatter.dense().trace().real() == doctest::Approx(sec.squaredNorm()).epsilon(1e-12));
    CHECK(st.scatter_positive_definite);
    CHECK(st.z_block(2).size() == 2);
    CHECK(st.s_block(2, 3).cols() == 2);
  }
  SUBCASE("dimension checks") {
    const CanonicalForm cf = canonicalize(random_scenario(d, rng));
    CHECK_THROWS_KIND(transform_data(cf, rng.complex_normal_vector(5), rng.complex_normal_matrix(6, 9)),
                      ErrorKind::DimensionMismatch);
    CHECK_THROWS_KIND(transform_data(cf, rng.complex_normal_vector(6), rng.complex_normal_matrix(6, 4)),
                      ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("synthesize_data") {
  const Dimensions d{4, 6, 1, 1};
  const ComplexMatrix e = identity(4);
  const Scenario s = make_scenario(d, e.col(1), e.col(0), HermitianMatrix::identity(4));
  SignalParams zero{ComplexVector::Zero(1), ComplexVector::Zero(1)};

  SUBCASE("zero-mean noise") {
    RandomStream rng(35);
    ComplexVector mean = ComplexVector::Zero(4);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) mean += synthesize_data(s, zero, Hypothesis::H0, rng).primary;
    mean /= static_cast<double>(draws);
    CHECK(mean.norm() <= 4.0 * std::sqrt(4.0 / draws));
  }
  SUBCASE("huge target dominates") {
    RandomStream rng(36);
    SignalParams big{ComplexVector::Constant(1, 1e6), ComplexVector::Zero(1)};
    const RawData raw = synthesize_data(s, big, Hypothesis::H1, rng);
    CHECK(raw.primary.norm() == doctest::Approx(1e6).epsilon(1e-4));
  }
  SUBCASE("deterministic under a seed") {
    RandomStream a(37), b(37);
    const RawData ra = synthesize_data(s, zero, Hypothesis::H0, a);
    const RawData rb = synthesize_data(s, zero, Hypothesis::H0, b);
    CHECK(max_abs(ra.primary - rb.primary) == 0.0);
    CHECK(max_abs(ra.secondary - rb.secondary) == 0.0);
  }
  SUBCASE("sample covariance approaches the rotated covariance") {
    RandomStream rng(38);
    const Dimensions dd{6, 400, 2, 2};
    const Scenario sc = random_scenario(dd, rng);
    const CanonicalForm cf = canonicalize(sc);
    SignalParams sp{ComplexVector::Zero(2), ComplexVector::Zero(2)};
    double total = 0.0;
    const int seeds = 10;
    for (int k = 0; k < seeds; ++k) {
      const RawData raw = synthesize_data(sc, sp, Hypothesis::H0, rng);
      const SufficientStatistic st = transform_data(cf, raw.primary, raw.secondary);
      total += (st.scatter.dense() / 400.0 - cf.covariance.dense()).norm() / sc.covariance.dense().norm();
    }
    CHECK(total / seeds <= 5.0 / std::sqrt(400.0));
  }
}
