#include "invdet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "invdet/canonical.hpp"

namespace invdet {

Scenario make_scenario(const Dimensions& dims, ComplexMatrix signal_basis,
                       ComplexMatrix jammer_basis, HermitianMatrix covariance, double noise_power,
                       double clutter_power, double one_lag_corr) {
  dims.validate();
  const Index n = dims.channels;
  if (signal_basis.rows() != n || signal_basis.cols() != dims.signal_rank ||
      jammer_basis.rows() != n || jammer_basis.cols() != dims.jammer_rank ||
      covariance.dim() != n) {
    throw Error(ErrorKind::DimensionMismatch, "scenario matrices do not match " + dims.describe());
  }
  ComplexMatrix joint(n, dims.subspace_rank());
  joint << jammer_basis, signal_basis;
  (void)qr_decompose(joint);  // throws RankDeficient

  Eigen::LLT<ComplexMatrix> llt(covariance.dense());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "disturbance covariance is not positive definite");
  }
  Scenario s;
  s.dims = dims;
  s.signal_basis = std::move(signal_basis);
  s.jammer_basis = std::move(jammer_basis);
  s.covariance_factor = llt.matrixL();
  s.covariance = std::move(covariance);
  s.noise_power = noise_power;
  s.clutter_power = clutter_power;
  s.one_lag_corr = one_lag_corr;
  return s;
}

HermitianMatrix build_clutter_covariance(int channels, double noise_power, double clutter_power,
                                         double one_lag_corr) {
  if (channels < 1 || !(noise_power > 0.0) || clutter_power < 0.0 || one_lag_corr < 0.0 ||
      one_lag_corr >= 1.0) {
    throw Error(ErrorKind::InvalidArgument,
                "clutter covariance needs sigma_n^2 > 0, sigma_c^2 >= 0, 0 <= rho < 1");
  }
  ComplexMatrix m(channels, channels);
  for (int i = 0; i < channels; ++i)
    for (int j = 0; j < channels; ++j)
      m(i, j) = clutter_power * std::pow(one_lag_corr, std::abs(i - j));
  m.diagonal().array() += noise_power;
  return HermitianMatrix(m);
}

ComplexMatrix build_steering_subspace(int channels, const std::vector<double>& frequencies) {
  if (channels < 1 || frequencies.empty()) {
    throw Error(ErrorKind::InvalidArgument, "steering subspace needs N >= 1 and a frequency");
  }
  std::vector<double> sorted = frequencies;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::DuplicateFrequency, "steering frequencies must be distinct");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(channels));
  ComplexMatrix a(channels, static_cast<Index>(frequencies.size()));
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    const double f = frequencies[k];
    if (f < -0.5 || f >= 0.5) {
      throw Error(ErrorKind::DomainError, "normalized frequency must lie in [-0.5, 0.5)");
    }
    for (int i = 0; i < channels; ++i) {
      a(i, static_cast<Index>(k)) = scale * std::polar(1.0, 2.0 * std::numbers::pi * f * i);
    }
  }
  return a;
}

std::vector<double> default_signal_frequencies(int channels, int rank) {
  // spacing of half a Doppler bin, centred on zero
  const double step = 0.5 / channels;
  std::vector<double> f(rank);
  for (int k = 0; k < rank; ++k) f[k] = (k - 0.5 * (rank - 1)) * step;
  return f;
}

std::vector<double> default_jammer_frequencies(int rank) {
  // +-0.2, +-0.3, ... ; wraps inside [-0.5, 0.5) for large ranks
  std::vector<double> f;
  for (int k = 0; static_cast<int>(f.size()) < rank; ++k) {
    const double mag = 0.2 + 0.1 * (k % 3) + 0.0125 * (k / 3);
    f.push_back(mag);
    if (static_cast<int>(f.size()) < rank) f.push_back(-mag);
  }
  return f;
}

Scenario build_doppler_scenario(const DopplerScenarioSpec& spec) {
  spec.dims.validate();
  const auto& d = spec.dims;
  const auto sig = spec.signal_frequencies.empty()
                       ? default_signal_frequencies(d.channels, d.signal_rank)
                       : spec.signal_frequencies;
  const auto jam = spec.jammer_frequencies.empty() ? default_jammer_frequencies(d.jammer_rank)
                                                   : spec.jammer_frequencies;
  if (static_cast<int>(sig.size()) != d.signal_rank ||
      static_cast<int>(jam.size()) != d.jammer_rank) {
    throw Error(ErrorKind::DimensionMismatch, "frequency list lengths must equal r and t");
  }
  const double clutter = spec.noise_power * db_to_linear(spec.cnr_db);
  return make_scenario(d, build_steering_subspace(d.channels, sig),
                       build_steering_subspace(d.channels, jam),
                       build_clutter_covariance(d.channels, spec.noise_power, clutter,
                                                spec.one_lag_corr),
                       spec.noise_power, clutter, spec.one_lag_corr);
}

double compute_sinr(const CanonicalForm& cf, const ComplexVector& theta2) {
  const auto& p = cf.part;
  if (theta2.size() != p.signal) {
    throw Error(ErrorKind::DimensionMismatch, "theta2 must have length r");
  }
  // Schur complement of the (2,3) trailing block of M; reduces to M22 when m = N
  const HermitianMatrix trailing = cf.covariance.principal(p.jammer, p.signal + p.residual);
  const HermitianMatrix conditional = schur_complement(trailing, p.signal);
  return inverse_quadratic_form(conditional, theta2);
}

double target_sinr(const CanonicalForm& cf, const ComplexVector& target) {
  return compute_sinr(cf, cf.r_signal() * target);
}

ComplexVector scale_signal_to_sinr(const CanonicalForm& cf, const ComplexVector& direction,
                                   double sinr) {
  if (sinr < 0.0) throw Error(ErrorKind::InvalidArgument, "target SINR must be >= 0");
  if (direction.size() != cf.part.signal) {
    throw Error(ErrorKind::DimensionMismatch, "target direction must have length r");
  }
  if (direction.squaredNorm() == 0.0) {
    throw Error(ErrorKind::ZeroDirection, "signal direction is zero");
  }
  const double unit = target_sinr(cf, direction);
  if (!(unit > 0.0)) throw Error(ErrorKind::ZeroDirection, "signal direction yields zero SINR");
  return direction * std::sqrt(sinr / unit);
}

ComplexVector scale_jammer_to_inr(const Scenario& scenario, const CanonicalForm& cf,
                                  const ComplexVector& direction, double inr_db) {
  if (direction.size() != cf.part.jammer) {
    throw Error(ErrorKind::DimensionMismatch, "jammer direction must have length t");
  }
  if (std::isinf(inr_db) && inr_db < 0) return ComplexVector::Zero(direction.size());
  if (direction.squaredNorm() == 0.0) {
    throw Error(ErrorKind::ZeroDirection, "jammer direction is zero");
  }
  const double unit = (cf.r_jammer() * direction).squaredNorm() / scenario.noise_power;
  return direction * std::sqrt(db_to_linear(inr_db) / unit);
}

}  // namespace invdet
