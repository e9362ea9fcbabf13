#pragma once

// Small dense complex kernels. Dimensions here never exceed a few tens, so
// everything is plain Eigen dynamic storage and direct factorizations.

#include <complex>

#include <Eigen/Dense>

#include "invdet/error.hpp"

namespace invdet {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Relative rank tolerance used by qr_decompose.
inline constexpr double kRankTolerance = 1e-10;

/// Hermitian matrix. Only the lower triangle of the source is read; the upper
/// triangle is its mirror and the diagonal is forced real.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& source);

  static HermitianMatrix identity(Index dim);
  static HermitianMatrix zero(Index dim);

  Index dim() const noexcept { return dense_.rows(); }
  const ComplexMatrix& dense() const noexcept { return dense_; }
  Complex operator()(Index i, Index j) const { return dense_(i, j); }

  /// Principal sub-block [start, start+size) x [start, start+size).
  HermitianMatrix principal(Index start, Index size) const;

  /// Cholesky succeeds.
  bool is_positive_definite() const;

 private:
  ComplexMatrix dense_;
};

struct QrFactors {
  ComplexMatrix q;  // rows x cols, orthonormal columns
  ComplexMatrix r;  // cols x cols, upper triangular, positive real diagonal
};

/// Thin Householder QR with the phase convention diag(R) > 0.
/// Throws RankDeficient when min|R_kk| <= kRankTolerance * max|R_kk|.
QrFactors qr_decompose(const ComplexMatrix& a);

/// N x N unitary whose leading columns are exactly `q` (orthonormal columns)
/// and whose trailing columns complete them to a basis.
ComplexMatrix complete_unitary(const ComplexMatrix& q);

/// X with X = X^H, X > 0 and X M X = I. Eigendecomposition based.
HermitianMatrix hermitian_inv_sqrt(const HermitianMatrix& m);

/// Principal square root of a positive definite Hermitian matrix.
HermitianMatrix hermitian_sqrt(const HermitianMatrix& m);

/// For M = [[A, B], [B^H, D]] with A of size `lead`, returns A - B D^-1 B^H.
/// Throws SingularBlock if D is not positive definite. lead == dim returns A.
HermitianMatrix schur_complement(const HermitianMatrix& m, Index lead);

/// z2 - S23 S33^-1 z3.
ComplexVector regress_out(const ComplexVector& z2, const ComplexVector& z3,
                          const ComplexMatrix& s23, const HermitianMatrix& s33);

/// x^H A^-1 x for positive definite A via Cholesky. Throws SingularBlock.
double inverse_quadratic_form(const HermitianMatrix& a, const ComplexVector& x);

/// Inverse of a positive definite Hermitian matrix. Throws SingularBlock.
HermitianMatrix hermitian_inverse(const HermitianMatrix& a);

/// Spectral condition number sigma_max / sigma_min of a square matrix.
double condition_number(const ComplexMatrix& a);

}  // namespace invdet
