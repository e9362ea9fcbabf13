#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "invdet/canonical.hpp"
#include "invdet/detectors.hpp"
#include "invdet/scenario.hpp"

namespace invdet {

/// How trials are synthesized: the scenario, its canonical form, the target
/// direction p (scaled per SINR) and the jammer q. q has fixed INR and a
/// random phase drawn per trial.
struct TrialModel {
  Scenario scenario;
  CanonicalForm cf;
  ComplexVector signal_direction;  // p / ||p||, length r
  ComplexVector jammer;            // q at the configured INR, length t

  /// Uniform directions (all-ones, normalized) for p and q.
  static TrialModel make(const Scenario& scenario, double inr_db);
  static TrialModel make(const Scenario& scenario, const ComplexVector& signal_direction,
                         const ComplexVector& jammer_direction, double inr_db);
};

/// Maximal invariants of a batch of trials. For m = N only p1 is filled and
/// it holds p3.
struct InvariantSamples {
  bool split = true;
  std::vector<double> p1;
  std::vector<double> p2;
  std::size_t size() const noexcept { return p1.size(); }
};

/// Trial i draws from RandomStream::keyed(seed, stream, i), so the result
/// does not depend on `threads` (0 means hardware concurrency).
InvariantSamples simulate_invariants(const TrialModel& model, Hypothesis hypothesis, double sinr,
                                     std::size_t trials, std::uint64_t seed, std::uint64_t stream,
                                     int threads = 1);

/// Stream key used for H1 trials at a given SINR (dB).
std::uint64_t pd_stream(double sinr_db) noexcept;
inline constexpr std::uint64_t kThresholdStream = 0;

struct ExperimentSpec {
  Scenario scenario;
  std::vector<DetectorKind> detectors;
  double pfa = 1e-2;
  std::vector<double> sinr_grid_db;
  std::size_t trials_threshold = 200000;
  std::size_t trials_pd = 5000;
  std::uint64_t seed = 1;
  double inr_db = 30.0;
  int threads = 1;
  /// Simulate every detector (otherwise only those without a closed form).
  bool monte_carlo_all = false;

  /// Throws ConfigError for an empty or non-increasing grid or pfa outside (0, 1).
  void validate() const;
};

struct PdEstimate {
  double pd = 0.0;
  double std_error = 0.0;  // sqrt(pd (1 - pd) / trials)
  std::size_t trials = 0;
};

struct CurveRow {
  double sinr_db = 0.0;
  double eta = 0.0;
  std::optional<double> pd_closed;
  std::optional<double> pd_mc;
  std::optional<double> pd_stderr;
};

struct PerformanceCurve {
  DetectorKind detector;
  std::optional<double> eta;           // shared threshold; absent for the MPID
  std::optional<double> achieved_pfa;  // from the threshold trials, when simulated
  std::vector<CurveRow> rows;
};

/// ceil(trials pfa)-th largest threshold statistic of the samples.
/// Throws InsufficientTrials when trials pfa < 100.
double calibrate_threshold(const InvariantSamples& h0, const DetectorKind& detector,
                           const Dimensions& dims, double pfa);

/// Fraction of samples whose threshold statistic exceeds eta.
PdEstimate fraction_exceeding(const InvariantSamples& samples, const DetectorKind& detector,
                              const Dimensions& dims, double eta);

/// Simulates spec.trials_threshold H0 trials and calibrates.
double calibrate_threshold_mc(const ExperimentSpec& spec, const DetectorKind& detector);

/// Simulates spec.trials_pd H1 trials at the given SINR.
PdEstimate estimate_pd(const ExperimentSpec& spec, const DetectorKind& detector, double eta,
                       double sinr_db);

/// Thresholds from the closed forms when available (Monte Carlo for the
/// MPID, recalibrated at each SINR), then a sweep of the SINR grid.
std::vector<PerformanceCurve> run_experiment(const ExperimentSpec& spec);

}  // namespace invdet
