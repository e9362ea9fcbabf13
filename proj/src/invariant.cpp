#include "invdet/invariant.hpp"

#include <algorithm>
#include <cmath>

namespace invdet {

namespace {

void require_probability(double p, const char* name) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::DomainError, std::string(name) + " must lie in (0, 1]");
  }
}

void require_nonnegative(double m, const char* name) {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw Error(ErrorKind::DomainError, std::string(name) + " must be finite and >= 0");
  }
}

bool close(double a, double b, double tolerance) {
  return std::abs(a - b) <= tolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

ComplexMatrix block_diag(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Quantities built from the trailing (2,3) block of a statistic, used by
// the reconstruction. With no residual block everything reduces to block 2.
struct TrailingParts {
  ComplexMatrix wp;      // W P
  ComplexMatrix wp_inv;  // (W P)^-1
  ComplexVector y2;      // S_{2.3}^{-1/2} z_{2.3}
  ComplexVector y3;      // S33^{-1/2} z3
};

TrailingParts trailing_parts(const SufficientStatistic& s) {
  const Index r = s.part.signal;
  const Index n3 = s.part.residual;
  const HermitianMatrix s2 = s.s_trailing();
  const ComplexVector z23 = s.z_trailing();
  TrailingParts out;
  if (n3 == 0) {
    const HermitianMatrix w = hermitian_inv_sqrt(s2);
    out.wp = w.dense();
    out.wp_inv = hermitian_sqrt(s2).dense();
    out.y2 = w.dense() * z23;
    out.y3 = ComplexVector(0);
    return out;
  }
  const HermitianMatrix s33 = s2.principal(r, n3);
  const ComplexMatrix s23 = s2.dense().topRightCorner(r, n3);
  const HermitianMatrix s2_3 = schur_complement(s2, r);
  const ComplexMatrix gain = s33.dense().llt().solve(s23.adjoint()).adjoint();  // S23 S33^-1

  ComplexMatrix p = ComplexMatrix::Identity(r + n3, r + n3);
  p.topRightCorner(r, n3) = -gain;
  ComplexMatrix p_inv = ComplexMatrix::Identity(r + n3, r + n3);
  p_inv.topRightCorner(r, n3) = gain;

  const ComplexMatrix w = block_diag(hermitian_inv_sqrt(s2_3).dense(), hermitian_inv_sqrt(s33).dense());
  const ComplexMatrix w_inv = block_diag(hermitian_sqrt(s2_3).dense(), hermitian_sqrt(s33).dense());
  out.wp = w * p;
  out.wp_inv = p_inv * w_inv;
  const ComplexVector y = out.wp * z23;
  out.y2 = y.head(r);
  out.y3 = y.tail(n3);
  return out;
}

}  // namespace

MaximalInvariant MaximalInvariant::from_quadratic_forms(double m1, double m2) {
  require_nonnegative(m1, "m1");
  require_nonnegative(m2, "m2");
  MaximalInvariant out;
  out.kind = Case::Split;
  out.m1 = m1;
  out.m2 = m2;
  out.p1 = (1.0 + m2) / (1.0 + m1 + m2);
  out.p2 = 1.0 / (1.0 + m2);
  return out;
}

MaximalInvariant MaximalInvariant::from_probabilities(double p1, double p2) {
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  MaximalInvariant out;
  out.kind = Case::Split;
  out.p1 = p1;
  out.p2 = p2;
  out.m2 = 1.0 / p2 - 1.0;
  out.m1 = (1.0 - p1) / (p1 * p2);
  return out;
}

MaximalInvariant MaximalInvariant::full_from_quadratic_form(double m3) {
  require_nonnegative(m3, "m3");
  MaximalInvariant out;
  out.kind = Case::Full;
  out.m3 = m3;
  out.p3 = 1.0 / (1.0 + m3);
  return out;
}

MaximalInvariant MaximalInvariant::full_from_probability(double p3) {
  require_probability(p3, "p3");
  MaximalInvariant out;
  out.kind = Case::Full;
  out.p3 = p3;
  out.m3 = 1.0 / p3 - 1.0;
  return out;
}

bool invariants_close(const MaximalInvariant& a, const MaximalInvariant& b, double tolerance) {
  if (a.kind != b.kind) return false;
  if (a.split()) return close(a.m1, b.m1, tolerance) && close(a.m2, b.m2, tolerance);
  return close(a.m3, b.m3, tolerance);
}

MaximalInvariant compute_maximal_invariant(const SufficientStatistic& stat) {
  const Index r = stat.part.signal;
  const Index n3 = stat.part.residual;
  const HermitianMatrix s2 = stat.s_trailing();
  const ComplexVector z23 = stat.z_trailing();
  if (n3 == 0) {
    return MaximalInvariant::full_from_quadratic_form(inverse_quadratic_form(s2, z23));
  }
  const HermitianMatrix s33 = s2.principal(r, n3);
  const ComplexVector z2 = z23.head(r);
  const ComplexVector z3 = z23.tail(n3);
  const ComplexVector z2_3 = regress_out(z2, z3, s2.dense().topRightCorner(r, n3), s33);
  const double m1 = inverse_quadratic_form(schur_complement(s2, r), z2_3);
  const double m2 = inverse_quadratic_form(s33, z3);
  return MaximalInvariant::from_quadratic_forms(m1, m2);
}

GroupElement GroupElement::identity(Partition part) {
  GroupElement e;
  e.part = part;
  e.g = ComplexMatrix::Identity(part.total(), part.total());
  e.f = ComplexVector::Zero(part.total());
  return e;
}

void GroupElement::validate(double tolerance) const {
  const Index n = part.total();
  if (g.rows() != n || g.cols() != n || f.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "group element sizes disagree with partition");
  }
  double scale = g.cwiseAbs().maxCoeff();
  const double limit = tolerance * std::max(scale, 1.0);
  for (int bj = 1; bj <= 3; ++bj) {
    for (int bi = bj + 1; bi <= 3; ++bi) {
      if (part.size(bi) == 0 || part.size(bj) == 0) continue;
      const double below = g.block(part.offset(bi), part.offset(bj), part.size(bi), part.size(bj))
                               .cwiseAbs()
                               .maxCoeff();
      if (below > limit) {
        throw Error(ErrorKind::DomainError, "G is not block upper triangular");
      }
    }
  }
  const Index trailing = part.signal + part.residual;
  if (trailing > 0 && f.tail(trailing).cwiseAbs().maxCoeff() > tolerance * std::max(1.0, f.norm())) {
    throw Error(ErrorKind::DomainError, "f must vanish outside the jammer block");
  }
  for (int b = 1; b <= 3; ++b) {
    if (part.size(b) == 0) continue;
    const ComplexMatrix d = g.block(part.offset(b), part.offset(b), part.size(b), part.size(b));
    if (d.fullPivLu().rank() < part.size(b)) {
      throw Error(ErrorKind::DomainError, "diagonal block of G is singular");
    }
  }
}

SufficientStatistic apply_group_element(const GroupElement& element,
                                        const SufficientStatistic& stat) {
  if (!(element.part == stat.part)) {
    throw Error(ErrorKind::DimensionMismatch, "group element and statistic partitions differ");
  }
  return SufficientStatistic::make(
      stat.part, element.g * stat.z + element.f,
      HermitianMatrix(ComplexMatrix(element.g * stat.scatter.dense() * element.g.adjoint())));
}

GroupElement compose(const GroupElement& first, const GroupElement& second) {
  if (!(first.part == second.part)) {
    throw Error(ErrorKind::DimensionMismatch, "cannot compose elements of different groups");
  }
  GroupElement out;
  out.part = first.part;
  out.g = second.g * first.g;
  out.f = second.g * first.f + second.f;
  return out;
}

GroupElement inverse(const GroupElement& element) {
  GroupElement out;
  out.part = element.part;
  out.g = element.g.partialPivLu().inverse();
  out.f = -out.g * element.f;
  return out;
}

GroupElement random_group_element(Partition part, RandomStream& rng, double condition_cap) {
  if (!(condition_cap >= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "condition cap must be >= 1");
  }
  const double log_cap = std::log(condition_cap);
  auto random_unitary = [&](Index n) {
    return complete_unitary(qr_decompose(rng.complex_normal_matrix(n, n)).q);
  };
  auto well_conditioned = [&](Index n) {
    Eigen::VectorXd sigma(n);
    for (Index i = 0; i < n; ++i) sigma(i) = std::exp(rng.uniform() * log_cap);
    return ComplexMatrix(random_unitary(n) * sigma.cast<Complex>().asDiagonal() *
                         random_unitary(n).adjoint());
  };

  GroupElement e = GroupElement::identity(part);
  for (int b = 1; b <= 3; ++b) {
    const Index n = part.size(b);
    if (n == 0) continue;
    e.g.block(part.offset(b), part.offset(b), n, n) = well_conditioned(n);
    for (int c = b + 1; c <= 3; ++c) {
      if (part.size(c) == 0) continue;
      e.g.block(part.offset(b), part.offset(c), n, part.size(c)) =
          rng.complex_normal_matrix(n, part.size(c));
    }
  }
  if (part.jammer > 0) e.f.head(part.jammer) = rng.complex_normal_vector(part.jammer);
  return e;
}

ComplexMatrix aligning_unitary(const ComplexVector& from, const ComplexVector& to) {
  const Index n = from.size();
  if (to.size() != n) throw Error(ErrorKind::DimensionMismatch, "aligning vectors differ in size");
  const double nx = from.norm();
  const double ny = to.norm();
  if (nx == 0.0 && ny == 0.0) return ComplexMatrix::Identity(n, n);
  if (nx == 0.0 || ny == 0.0) {
    throw Error(ErrorKind::InvariantMismatch, "cannot align a zero vector with a nonzero one");
  }
  const ComplexVector target = to * (nx / ny);
  const Complex inner = target.dot(from);  // target^H from
  const double theta = std::abs(inner) > 0.0 ? -std::arg(inner) : 0.0;
  const Complex phase = std::polar(1.0, theta);
  const ComplexVector v = phase * from - target;
  const double vv = v.squaredNorm();
  ComplexMatrix u = phase * ComplexMatrix::Identity(n, n);
  if (vv <= 1e-28 * nx * nx) return u;
  return u - (2.0 / vv) * v * (v.adjoint() * u);
}

GroupElement reconstruct_group_element(const SufficientStatistic& target,
                                       const SufficientStatistic& source,
                                       double tolerance) {
  if (!(target.part == source.part)) {
    throw Error(ErrorKind::DimensionMismatch, "statistics have different partitions");
  }
  const MaximalInvariant inv_target = compute_maximal_invariant(target);
  const MaximalInvariant inv_source = compute_maximal_invariant(source);
  if (!invariants_close(inv_target, inv_source, tolerance)) {
    throw Error(ErrorKind::InvariantMismatch, "maximal invariants differ");
  }

  const Partition part = target.part;
  const Index t = part.jammer;
  const Index rest = part.signal + part.residual;

  const TrailingParts a = trailing_parts(target);
  const TrailingParts b = trailing_parts(source);
  ComplexMatrix u1 = aligning_unitary(b.y2, a.y2);
  if (part.residual > 0) u1 = block_diag(u1, aligning_unitary(b.y3, a.y3));
  const ComplexMatrix g3 = a.wp_inv * u1 * b.wp;

  GroupElement e;
  e.part = part;
  e.g = ComplexMatrix::Zero(part.total(), part.total());
  e.f = ComplexVector::Zero(part.total());
  e.g.bottomRightCorner(rest, rest) = g3;
  if (t == 0) return e;

  const HermitianMatrix s2 = target.s_trailing();
  const HermitianMatrix s2_bar = source.s_trailing();
  const ComplexMatrix s3 = target.scatter.dense().topRightCorner(t, rest);
  const ComplexMatrix s3_bar = source.scatter.dense().topRightCorner(t, rest);

  const ComplexMatrix g1 = hermitian_sqrt(schur_complement(target.scatter, t)).dense() *
                           hermitian_inv_sqrt(schur_complement(source.scatter, t)).dense();
  // G2^H = S2bar^-1 (G3^-1 S3^H - S3bar^H G1^H)
  const ComplexMatrix rhs = g3.partialPivLu().solve(s3.adjoint()) - s3_bar.adjoint() * g1.adjoint();
  const ComplexMatrix g2 = s2_bar.dense().llt().solve(rhs).adjoint();

  e.g.topLeftCorner(t, t) = g1;
  e.g.topRightCorner(t, rest) = g2;
  e.f.head(t) = target.z.head(t) - g1 * source.z.head(t) - g2 * source.z_trailing();
  return e;
}

ComplexMatrix whitening_block(const CanonicalForm& cf) {
  const Partition part = cf.part;
  const Index r = part.signal;
  const Index n3 = part.residual;
  const HermitianMatrix m2 = cf.covariance.principal(part.jammer, r + n3);
  if (n3 == 0) return hermitian_inv_sqrt(m2).dense();
  const HermitianMatrix m33 = m2.principal(r, n3);
  const ComplexMatrix m23 = m2.dense().topRightCorner(r, n3);
  const ComplexMatrix v22 = hermitian_inv_sqrt(schur_complement(m2, r)).dense();
  ComplexMatrix v = ComplexMatrix::Zero(r + n3, r + n3);
  v.topLeftCorner(r, r) = v22;
  v.topRightCorner(r, n3) = -v22 * m33.dense().llt().solve(m23.adjoint()).adjoint();
  v.bottomRightCorner(n3, n3) = hermitian_inv_sqrt(m33).dense();
  return v;
}

SufficientStatistic whiten(const SufficientStatistic& stat, const CanonicalForm& cf) {
  if (!(stat.part == cf.part)) {
    throw Error(ErrorKind::DimensionMismatch, "statistic and canonical form partitions differ");
  }
  const ComplexMatrix v = whitening_block(cf);
  const Partition out{0, stat.part.signal, stat.part.residual};
  return SufficientStatistic::make(
      out, v * stat.z_trailing(),
      HermitianMatrix(ComplexMatrix(v * stat.s_trailing().dense() * v.adjoint())));
}

}  // namespace invdet
