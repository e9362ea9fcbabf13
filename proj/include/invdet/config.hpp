#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "invdet/montecarlo.hpp"

namespace invdet {

/// JSON experiment description. Every key except N, K, r, t, sinr_grid_db
/// and detectors is optional; unknown keys are rejected.
struct ExperimentConfig {
  Dimensions dims;
  std::vector<double> signal_frequencies;
  std::vector<double> jammer_frequencies;
  double noise_power = 1.0;
  double cnr_db = 30.0;
  double inr_db = 30.0;
  double one_lag_corr = 0.95;
  double pfa = 1e-2;
  std::vector<double> sinr_grid_db;
  std::size_t trials_threshold = 200000;
  std::size_t trials_pd = 5000;
  std::uint64_t seed = 1;
  std::vector<std::string> detectors;
  std::optional<std::string> output_path;
  std::optional<std::string> output_format;  // "csv" or "json"
};

/// Throws ConfigError with the offending key in the message.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Builds the Doppler scenario and the experiment description.
ExperimentSpec make_experiment(const ExperimentConfig& config, int threads, bool monte_carlo_all);

}  // namespace invdet
