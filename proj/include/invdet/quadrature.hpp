#pragma once

#include <functional>
#include <vector>

namespace invdet {

/// Gauss-Legendre rule mapped to (0, 1).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule on (0, 1). Rules are computed once per n and cached.
const QuadratureRule& gauss_legendre_unit(int n);

struct QuadratureOptions {
  int initial_nodes = 256;
  int max_nodes = 8192;
  double tolerance = 1e-9;  // absolute, between successive estimates
};

/// Integral of f over (lo, hi): Gauss-Legendre with node doubling until two
/// successive estimates differ by less than the tolerance.
/// Throws QuadratureNotConverged when max_nodes is reached first.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureOptions& options = {});

}  // namespace invdet
