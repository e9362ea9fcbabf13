#include "invdet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace invdet {

HermitianMatrix::HermitianMatrix(const ComplexMatrix& source) {
  if (source.rows() != source.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "Hermitian matrix must be square");
  }
  const Index n = source.rows();
  dense_.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    dense_(j, j) = Complex(source(j, j).real(), 0.0);
    for (Index i = j + 1; i < n; ++i) {
      dense_(i, j) = source(i, j);
      dense_(j, i) = std::conj(source(i, j));
    }
  }
}

HermitianMatrix HermitianMatrix::identity(Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::principal(Index start, Index size) const {
  return HermitianMatrix(ComplexMatrix(dense_.block(start, start, size, size)));
}

bool HermitianMatrix::is_positive_definite() const {
  if (dim() == 0) return true;
  Eigen::LLT<ComplexMatrix> llt(dense_);
  return llt.info() == Eigen::Success;
}

QrFactors qr_decompose(const ComplexMatrix& a) {
  const Index rows = a.rows();
  const Index cols = a.cols();
  if (cols < 1 || rows < cols) {
    throw Error(ErrorKind::DimensionMismatch,
                "qr_decompose needs rows >= cols >= 1, got " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();

  double largest = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < cols; ++k) {
    const double mag = std::abs(r(k, k));
    largest = std::max(largest, mag);
    smallest = std::min(smallest, mag);
  }
  if (!(largest > 0.0) || smallest <= kRankTolerance * largest) {
    throw Error(ErrorKind::RankDeficient, "matrix is not of full column rank");
  }

  // absorb the diagonal phases into Q so that R_kk is real positive
  for (Index k = 0; k < cols; ++k) {
    const Complex phase = r(k, k) / std::abs(r(k, k));
    q.col(k) *= phase;
    r.row(k) *= std::conj(phase);
    r(k, k) = Complex(r(k, k).real(), 0.0);
  }
  return {std::move(q), std::move(r)};
}

ComplexMatrix complete_unitary(const ComplexMatrix& q) {
  const Index n = q.rows();
  const Index m = q.cols();
  Eigen::HouseholderQR<ComplexMatrix> qr(q);
  ComplexMatrix full = qr.householderQ();
  // the leading columns of `full` span the same space as q; overwrite them
  // with q itself so the completion is exact in those columns
  full.leftCols(m) = q;
  (void)n;
  return full;
}

namespace {

Eigen::SelfAdjointEigenSolver<ComplexMatrix> checked_eigen(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m.dense());
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "eigendecomposition failed");
  }
  const auto& values = eig.eigenvalues();
  const double top = values.cwiseAbs().maxCoeff();
  if (!(values.minCoeff() > 0.0) || values.minCoeff() <= 1e-300 ||
      values.minCoeff() <= top * std::numeric_limits<double>::epsilon()) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(values.minCoeff()) + " is not positive");
  }
  return eig;
}

}  // namespace

HermitianMatrix hermitian_inv_sqrt(const HermitianMatrix& m) {
  if (m.dim() == 0) return m;
  const auto eig = checked_eigen(m);
  const Eigen::VectorXd scale = eig.eigenvalues().array().rsqrt();
  const ComplexMatrix& v = eig.eigenvectors();
  return HermitianMatrix(ComplexMatrix(v * scale.cast<Complex>().asDiagonal() * v.adjoint()));
}

HermitianMatrix hermitian_sqrt(const HermitianMatrix& m) {
  if (m.dim() == 0) return m;
  const auto eig = checked_eigen(m);
  const Eigen::VectorXd scale = eig.eigenvalues().array().sqrt();
  const ComplexMatrix& v = eig.eigenvectors();
  return HermitianMatrix(ComplexMatrix(v * scale.cast<Complex>().asDiagonal() * v.adjoint()));
}

HermitianMatrix schur_complement(const HermitianMatrix& m, Index lead) {
  const Index n = m.dim();
  if (lead < 0 || lead > n) {
    throw Error(ErrorKind::DimensionMismatch, "schur_complement split out of range");
  }
  const Index tail = n - lead;
  const ComplexMatrix& d = m.dense();
  if (tail == 0) return m;
  Eigen::LLT<ComplexMatrix> llt(d.bottomRightCorner(tail, tail));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularBlock, "trailing block is not positive definite");
  }
  const ComplexMatrix b = d.topRightCorner(lead, tail);
  const ComplexMatrix solved = llt.solve(b.adjoint());
  return HermitianMatrix(ComplexMatrix(d.topLeftCorner(lead, lead) - b * solved));
}

ComplexVector regress_out(const ComplexVector& z2, const ComplexVector& z3,
                          const ComplexMatrix& s23, const HermitianMatrix& s33) {
  if (s23.rows() != z2.size() || s23.cols() != z3.size() || s33.dim() != z3.size()) {
    throw Error(ErrorKind::DimensionMismatch, "regress_out block sizes disagree");
  }
  if (z3.size() == 0) return z2;
  Eigen::LLT<ComplexMatrix> llt(s33.dense());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularBlock, "S33 is not positive definite");
  }
  return z2 - s23 * llt.solve(z3);
}

double inverse_quadratic_form(const HermitianMatrix& a, const ComplexVector& x) {
  if (a.dim() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "quadratic form size mismatch");
  }
  if (x.size() == 0) return 0.0;
  Eigen::LLT<ComplexMatrix> llt(a.dense());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularBlock, "matrix is not positive definite");
  }
  const ComplexVector y = llt.matrixL().solve(x);
  return y.squaredNorm();
}

HermitianMatrix hermitian_inverse(const HermitianMatrix& a) {
  Eigen::LLT<ComplexMatrix> llt(a.dense());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularBlock, "matrix is not positive definite");
  }
  return HermitianMatrix(ComplexMatrix(llt.solve(ComplexMatrix::Identity(a.dim(), a.dim()))));
}

double condition_number(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

}  // namespace invdet
