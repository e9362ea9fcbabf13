#pragma once

#include "invdet/canonical.hpp"
#include "invdet/linalg.hpp"
#include "invdet/random.hpp"

namespace invdet {

/// Maximal invariant of (z, S) under the group L.
///
/// Split case (m < N): the pair
///   m1 = z_{2.3}^H S_{2.3}^{-1} z_{2.3},   m2 = z3^H S33^{-1} z3
/// with the stochastic representation p1 = 1/(1 + m1/(1 + m2)), p2 = 1/(1 + m2).
/// p2 is ancillary: its law is the same under both hypotheses.
///
/// Full case (m = N): the scalar m3 = z2^H S22^{-1} z2 and p3 = 1/(1 + m3).
struct MaximalInvariant {
  enum class Case { Split, Full };

  Case kind = Case::Split;
  double m1 = 0.0;
  double m2 = 0.0;
  double p1 = 1.0;
  double p2 = 1.0;
  double m3 = 0.0;
  double p3 = 1.0;

  bool split() const noexcept { return kind == Case::Split; }

  static MaximalInvariant from_quadratic_forms(double m1, double m2);
  static MaximalInvariant from_probabilities(double p1, double p2);
  static MaximalInvariant full_from_quadratic_form(double m3);
  static MaximalInvariant full_from_probability(double p3);
};

/// True when both invariants have the same case and their quadratic forms
/// agree to `tolerance` relative (floored at 1).
bool invariants_close(const MaximalInvariant& a, const MaximalInvariant& b, double tolerance);

MaximalInvariant compute_maximal_invariant(const SufficientStatistic& stat);

/// Element (G, f) of L: G block upper triangular with nonsingular diagonal
/// blocks (t, r, N - m), f nonzero only in its first t entries.
struct GroupElement {
  Partition part;
  ComplexMatrix g;
  ComplexVector f;

  static GroupElement identity(Partition part);

  /// Throws DimensionMismatch / DomainError when the structure is violated.
  void validate(double tolerance = 0.0) const;
};

/// (G z + f, G S G^H).
SufficientStatistic apply_group_element(const GroupElement& element,
                                        const SufficientStatistic& stat);

/// (G1, f1) o (G2, f2) = (G2 G1, G2 f1 + f2): applying `first` and then
/// `second` equals applying the composition.
GroupElement compose(const GroupElement& first, const GroupElement& second);

GroupElement inverse(const GroupElement& element);

/// Random element with every diagonal block's condition number <= condition_cap.
GroupElement random_group_element(Partition part, RandomStream& rng, double condition_cap);

/// Constructs (G, f) with apply_group_element((G, f), source) == target.
/// Throws InvariantMismatch when the two maximal invariants differ by more
/// than `tolerance`.
GroupElement reconstruct_group_element(const SufficientStatistic& target,
                                       const SufficientStatistic& source,
                                       double tolerance = 1e-8);

/// Unitary U with U from = to for vectors of equal norm. Uses a phase
/// rotation followed by a Householder reflection; identity for equal inputs.
ComplexMatrix aligning_unitary(const ComplexVector& from, const ComplexVector& to);

/// Applies the trailing block V2 of the whitening transform built from M.
/// The result has partition (0, r, N - m): w = V2 [z2; z3], S0 = V2 S2 V2^H.
SufficientStatistic whiten(const SufficientStatistic& stat, const CanonicalForm& cf);

/// The whitening block V2 itself, (N - t) x (N - t).
ComplexMatrix whitening_block(const CanonicalForm& cf);

}  // namespace invdet
