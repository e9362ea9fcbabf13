#pragma once

#include <doctest.h>

#include "invdet/linalg.hpp"
#include "invdet/random.hpp"

namespace testing {

using namespace invdet;

inline HermitianMatrix random_pd(Index n, RandomStream& rng) {
  const ComplexMatrix a = rng.complex_normal_matrix(n, n + 3);
  return HermitianMatrix(ComplexMatrix(a * a.adjoint()));
}

inline double max_abs(const ComplexMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

}  // namespace testing

#define CHECK_THROWS_KIND(expr, k)                          \
  do {                                                      \
    bool caught_ = false;                                   \
    try {                                                   \
      (void)(expr);                                         \
    } catch (const invdet::Error& e_) {                     \
      caught_ = true;                                       \
      CHECK_MESSAGE(e_.kind() == (k), e_.what());           \
    }                                                       \
    CHECK_MESSAGE(caught_, "expected an invdet::Error");    \
  } while (false)
