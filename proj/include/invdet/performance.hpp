#pragma once

// Closed-form false alarm and detection probabilities. Thresholds refer to
// the threshold statistics of detectors.hpp. The detection integrals run
// over the law of p2 (density f_beta(u; M + r, N - m), M = K - (N - t) + 1)
// with noncentrality delta^2(u) = u SINR.

#include <optional>

#include "invdet/detectors.hpp"
#include "invdet/dimensions.hpp"

namespace invdet {

struct OperatingPoint {
  DetectorKind detector;
  double eta = 0.0;
  double pfa = 1.0;
  std::optional<double> sinr_db;
  std::optional<double> pd;
};

/// (1+eta)^{-(r+M-1)} sum_{l<r} C(r+M-1, l) eta^l; 1 for eta <= 0.
double pfa_glrt(double eta, const Dimensions& dims);
double pd_glrt(double eta, const Dimensions& dims, double sinr);

double pfa_2sglrt(double eta, const Dimensions& dims);
double pd_2sglrt(double eta, const Dimensions& dims, double sinr);

/// Support of the LMPID statistic is [-1, a]; pfa is 1 below and 0 above.
double pfa_lmpid(double eta, const Dimensions& dims);
double pd_lmpid(double eta, const Dimensions& dims, double sinr);

/// m = N: (1+eta)^{-K} sum_{l<r} C(K, l) eta^l and the noncentral F survival.
double pfa_ed(double eta, const Dimensions& dims);
double pd_ed(double eta, const Dimensions& dims, double sinr);

/// Dispatch on the detector. When m = N every detector is routed to the ED
/// formulas after mapping its threshold onto the ED scale. The MPID has no
/// closed form and raises InvalidArgument.
double pfa(const DetectorKind& kind, double eta, const Dimensions& dims);
double pd(const DetectorKind& kind, double eta, const Dimensions& dims, double sinr);

/// Lower and upper ends of the threshold statistic's support.
std::pair<double, double> threshold_support(const DetectorKind& kind, const Dimensions& dims);

/// eta with |pfa(eta) - target| <= 1e-10 target. A target of 1 returns the
/// lower support point. Throws NotBracketable for targets outside (0, 1].
double invert_threshold(const DetectorKind& kind, const Dimensions& dims, double target_pfa);

}  // namespace invdet
