#pragma once

#include <utility>

#include "invdet/dimensions.hpp"
#include "invdet/linalg.hpp"
#include "invdet/random.hpp"
#include "invdet/scenario.hpp"

namespace invdet {

/// Rotated coordinate system in which the jammer subspace occupies the first
/// t coordinates and the signal subspace the next r.
struct CanonicalForm {
  Partition part;
  ComplexMatrix rotation;    // U, N x N unitary
  ComplexMatrix q_factor;    // Q of [J H] = QR, N x m
  ComplexMatrix r_factor;    // R, m x m upper triangular
  HermitianMatrix covariance;  // M = U M0 U^H

  ComplexMatrix r_jammer() const;  // R_J, t x t
  ComplexMatrix r_cross() const;   // R_0, t x r
  ComplexMatrix r_signal() const;  // R_1, r x r
  ComplexMatrix jammer_selector() const;  // E_t, N x t
  ComplexMatrix signal_selector() const;  // E_r, N x r

  /// Block (i, j) of M with i, j in {1, 2, 3}.
  ComplexMatrix covariance_block(int i, int j) const;
};

CanonicalForm canonicalize(const Scenario& scenario);

/// Primary vector z and scatter matrix S, partitioned (t, r, N - m).
struct SufficientStatistic {
  Partition part;
  ComplexVector z;
  HermitianMatrix scatter;
  bool scatter_positive_definite = false;

  auto z_block(int i) const { return z.segment(part.offset(i), part.size(i)); }
  ComplexMatrix s_block(int i, int j) const {
    return scatter.dense().block(part.offset(i), part.offset(j), part.size(i), part.size(j));
  }
  /// Trailing (2,3) x (2,3) block of S.
  HermitianMatrix s_trailing() const {
    return scatter.principal(part.jammer, part.signal + part.residual);
  }
  ComplexVector z_trailing() const { return z.tail(part.signal + part.residual); }

  static SufficientStatistic make(Partition part, ComplexVector z, HermitianMatrix scatter);
};

/// z = U r, S = sum_k (U r_k)(U r_k)^H.
SufficientStatistic transform_data(const CanonicalForm& cf, const ComplexVector& primary,
                                   const ComplexMatrix& secondary);

struct RawData {
  ComplexVector primary;    // r, length N
  ComplexMatrix secondary;  // N x K
};

/// Draws (r, r_1..r_K) from the two-hypothesis model with noise CN(0, M0).
RawData synthesize_data(const Scenario& scenario, const SignalParams& signal,
                        Hypothesis hypothesis, RandomStream& rng);

}  // namespace invdet
