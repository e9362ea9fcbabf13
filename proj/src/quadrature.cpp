#include "invdet/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "invdet/error.hpp"

namespace invdet {

namespace {

QuadratureRule compute_rule(int n) {
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n starting from the Tricomi approximation
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    if (n == 1) dp = 1.0;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.weights[lo] = 0.5 * w;
    rule.weights[hi] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre_unit(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least one node");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureOptions& options) {
  if (!(hi > lo)) return 0.0;
  const double width = hi - lo;
  auto estimate = [&](int n) {
    const QuadratureRule& rule = gauss_legendre_unit(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += rule.weights[i] * f(lo + width * rule.nodes[i]);
    }
    return sum * width;
  };
  int n = options.initial_nodes;
  double previous = estimate(n);
  while (n < options.max_nodes) {
    n *= 2;
    const double current = estimate(n);
    if (std::abs(current - previous) < options.tolerance) return current;
    previous = current;
  }
  throw Error(ErrorKind::QuadratureNotConverged,
              "quadrature did not converge with " + std::to_string(n) + " nodes");
}

}  // namespace invdet
