#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "invdet/dimensions.hpp"
#include "invdet/linalg.hpp"

namespace invdet {

struct CanonicalForm;

/// Simulated radar environment: subspaces, disturbance covariance and the
/// power knobs that produced it.
struct Scenario {
  Dimensions dims;
  ComplexMatrix signal_basis;  // H, N x r
  ComplexMatrix jammer_basis;  // J, N x t
  HermitianMatrix covariance;  // M0
  double noise_power = 1.0;    // sigma_n^2
  double clutter_power = 0.0;  // sigma_c^2
  double one_lag_corr = 0.0;
  ComplexMatrix covariance_factor;  // lower Cholesky factor of M0
};

/// Validates geometry, [J H] rank and positive definiteness of M0.
Scenario make_scenario(const Dimensions& dims, ComplexMatrix signal_basis,
                       ComplexMatrix jammer_basis, HermitianMatrix covariance,
                       double noise_power = 1.0, double clutter_power = 0.0,
                       double one_lag_corr = 0.0);

/// sigma_n^2 I + sigma_c^2 Mc with (Mc)_ij = rho^|i-j|.
HermitianMatrix build_clutter_covariance(int channels, double noise_power, double clutter_power,
                                         double one_lag_corr);

/// Doppler steering vectors (1, e^{j2 pi f}, ..., e^{j2 pi f (N-1)})^T / sqrt(N).
ComplexMatrix build_steering_subspace(int channels, const std::vector<double>& frequencies);

/// Defaults: signal frequencies clustered around zero Doppler, jammer
/// frequencies spread symmetrically over the sidelobe region.
std::vector<double> default_signal_frequencies(int channels, int rank);
std::vector<double> default_jammer_frequencies(int rank);

/// Parameters of the Doppler simulation environment.
struct DopplerScenarioSpec {
  Dimensions dims;
  std::vector<double> signal_frequencies;  // empty -> defaults
  std::vector<double> jammer_frequencies;  // empty -> defaults
  double noise_power = 1.0;
  double cnr_db = 30.0;
  double one_lag_corr = 0.95;
};

Scenario build_doppler_scenario(const DopplerScenarioSpec& spec);

/// Target/jammer coordinates in the original (un-rotated) model.
struct SignalParams {
  ComplexVector target;  // p, length r
  ComplexVector jammer;  // q, length t
};

enum class Hypothesis { H0, H1 };

/// theta2^H (M22 - M23 M33^-1 M32)^-1 theta2, or theta2^H M22^-1 theta2 when m = N.
double compute_sinr(const CanonicalForm& cf, const ComplexVector& theta2);

/// SINR produced by target coordinates p (theta2 = R1 p).
double target_sinr(const CanonicalForm& cf, const ComplexVector& target);

/// Scales the target direction p so that the induced SINR equals `sinr`
/// (linear). Throws ZeroDirection for a zero direction.
ComplexVector scale_signal_to_sinr(const CanonicalForm& cf, const ComplexVector& direction,
                                   double sinr);

/// Scales the jammer direction q so that ||R_J q||^2 / sigma_n^2 = 10^(inr_db/10).
/// inr_db = -infinity gives a zero jammer.
ComplexVector scale_jammer_to_inr(const Scenario& scenario, const CanonicalForm& cf,
                                  const ComplexVector& direction, double inr_db);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace invdet
