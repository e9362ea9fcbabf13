#include "invdet/canonical.hpp"

#include "invdet/kernels/kernels.hpp"

namespace invdet {

ComplexMatrix CanonicalForm::r_jammer() const {
  return r_factor.topLeftCorner(part.jammer, part.jammer);
}

ComplexMatrix CanonicalForm::r_cross() const {
  return r_factor.topRightCorner(part.jammer, part.signal);
}

ComplexMatrix CanonicalForm::r_signal() const {
  return r_factor.bottomRightCorner(part.signal, part.signal);
}

ComplexMatrix CanonicalForm::jammer_selector() const {
  ComplexMatrix e = ComplexMatrix::Zero(part.total(), part.jammer);
  e.topRows(part.jammer).setIdentity();
  return e;
}

ComplexMatrix CanonicalForm::signal_selector() const {
  ComplexMatrix e = ComplexMatrix::Zero(part.total(), part.signal);
  e.middleRows(part.jammer, part.signal).setIdentity();
  return e;
}

ComplexMatrix CanonicalForm::covariance_block(int i, int j) const {
  return covariance.dense().block(part.offset(i), part.offset(j), part.size(i), part.size(j));
}

CanonicalForm canonicalize(const Scenario& scenario) {
  const auto& d = scenario.dims;
  ComplexMatrix joint(d.channels, d.subspace_rank());
  joint << scenario.jammer_basis, scenario.signal_basis;
  QrFactors qr = qr_decompose(joint);

  CanonicalForm cf;
  cf.part = Partition::from(d);
  cf.rotation = complete_unitary(qr.q).adjoint();
  cf.covariance =
      HermitianMatrix(ComplexMatrix(cf.rotation * scenario.covariance.dense() * cf.rotation.adjoint()));
  cf.q_factor = std::move(qr.q);
  cf.r_factor = std::move(qr.r);
  return cf;
}

SufficientStatistic SufficientStatistic::make(Partition part, ComplexVector z,
                                              HermitianMatrix scatter) {
  if (z.size() != part.total() || scatter.dim() != part.total()) {
    throw Error(ErrorKind::DimensionMismatch, "statistic sizes disagree with partition");
  }
  SufficientStatistic s;
  s.part = part;
  s.z = std::move(z);
  s.scatter = std::move(scatter);
  s.scatter_positive_definite = s.scatter.is_positive_definite();
  return s;
}

SufficientStatistic transform_data(const CanonicalForm& cf, const ComplexVector& primary,
                                   const ComplexMatrix& secondary) {
  const Index n = cf.part.total();
  if (primary.size() != n || secondary.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "data must have N rows");
  }
  if (secondary.cols() < n) {
    throw Error(ErrorKind::DimensionMismatch, "need K >= N secondary vectors");
  }
  const ComplexMatrix rotated = cf.rotation * secondary;
  ComplexMatrix scatter(n, n);
  kernels::scatter_matrix(rotated.data(), static_cast<std::size_t>(n),
                          static_cast<std::size_t>(rotated.cols()), scatter.data());
  return SufficientStatistic::make(cf.part, cf.rotation * primary, HermitianMatrix(scatter));
}

RawData synthesize_data(const Scenario& scenario, const SignalParams& signal,
                        Hypothesis hypothesis, RandomStream& rng) {
  const auto& d = scenario.dims;
  const Index n = d.channels;
  if (signal.jammer.size() != d.jammer_rank ||
      (hypothesis == Hypothesis::H1 && signal.target.size() != d.signal_rank)) {
    throw Error(ErrorKind::DimensionMismatch, "signal parameters do not match the scenario");
  }
  const ComplexMatrix& l = scenario.covariance_factor;
  RawData out;
  out.primary = l * rng.complex_normal_vector(n) + scenario.jammer_basis * signal.jammer;
  if (hypothesis == Hypothesis::H1) out.primary += scenario.signal_basis * signal.target;
  out.secondary = l * rng.complex_normal_matrix(n, d.snapshots);
  return out;
}

}  // namespace invdet
