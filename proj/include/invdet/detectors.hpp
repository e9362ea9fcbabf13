#pragma once

// Detector statistics. Every detector rejects H0 when its threshold
// statistic exceeds eta:
//   MPID        mpid_statistic(p1, p2; SINR)
//   LMPID       a p2 (1 - p1) - p1 p2,          a = (K - (N - t) + 1) / r
//   GLRT        (1 - p1) / p1 = 1/p1 - 1
//   2S-GLRT     (1 - p1) / (p1 p2)
//   ED          (1 - p3) / p3
// For m = N the GLRT and 2S-GLRT threshold statistics are the ED itself and
// the LMPID becomes a' (1 - p3) - p3 with a' = (K - r + 1) / r.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "invdet/canonical.hpp"
#include "invdet/dimensions.hpp"
#include "invdet/invariant.hpp"

namespace invdet {

enum class DetectorTag { Mpid, Lmpid, Glrt, TwoStepGlrt, Ed };

struct DetectorKind {
  DetectorTag tag = DetectorTag::Glrt;
  double sinr = 0.0;  // linear; MPID only (clairvoyant)

  static DetectorKind mpid(double sinr) { return {DetectorTag::Mpid, sinr}; }
  static DetectorKind of(DetectorTag tag) { return {tag, 0.0}; }

  /// "mpid", "lmpid", "glrt", "2s-glrt", "ed". Throws InvalidArgument.
  static DetectorKind parse(std::string_view name);

  std::string name() const;
  bool has_closed_form() const noexcept { return tag != DetectorTag::Mpid; }
  bool operator==(const DetectorKind&) const = default;
};

std::string_view to_string(DetectorTag tag) noexcept;

/// e^{-SINR p1 p2} sum_{k=0}^{M} C(M,k) (r-1)!/(r+k-1)! (SINR p2 (1-p1))^k,
/// M = K - (N - t) + 1. Accepts any real SINR (the series is entire in it);
/// evaluated by a term recurrence in log space with sign tracking.
double mpid_series(double p1, double p2, const Dimensions& dims, double sinr);

/// mpid_series with the (0,1] and SINR >= 0 preconditions enforced.
double mpid_statistic(const MaximalInvariant& inv, const Dimensions& dims, double sinr);

double lmpid_statistic(const MaximalInvariant& inv, const Dimensions& dims);

/// (1 - p1)/(p1 p2) for m < N.
double two_step_glrt_statistic(const MaximalInvariant& inv);

/// z^H S^{-1/2} P_perp(S^{-1/2} E) S^{-1/2} z with E the first `lead` unit vectors.
double projected_quadratic_form(const SufficientStatistic& stat, Index lead);

/// (1 + q_t) / (1 + q_m) with q_k = projected_quadratic_form(stat, k).
double glrt_raw(const SufficientStatistic& stat);

/// q_t - q_m.
double two_step_glrt_raw(const SufficientStatistic& stat);

/// z2^H S22^{-1} z2 for m = N.
double ed_raw(const SufficientStatistic& stat);

/// GLRT ratio 1/p1 (1/p3 when m = N). Evaluates the raw projection form as
/// well and throws SelfCheckFailed if the two disagree beyond 1e-9 relative.
double glrt_statistic(const SufficientStatistic& stat);

/// (1 - p3)/p3 for m = N; self-checked against ed_raw.
double ed_statistic(const SufficientStatistic& stat);

/// Threshold statistic of `kind` (see the table above) from the invariant.
double threshold_statistic(const DetectorKind& kind, const MaximalInvariant& inv,
                           const Dimensions& dims);

/// Batch form of threshold_statistic over invariant arrays. For m < N uses
/// p1/p2; for m = N only p1 is read and holds p3.
void threshold_statistics(const DetectorKind& kind, const Dimensions& dims,
                          const std::vector<double>& p1, const std::vector<double>& p2,
                          std::vector<double>& out);

/// Scans mpid_statistic over 1000 p1 values for several p2 values and every
/// SINR in the grid; true iff it is nonincreasing in p1 everywhere.
bool cmpid_direction_check(const Dimensions& dims, const std::vector<double>& sinr_grid);

}  // namespace invdet
