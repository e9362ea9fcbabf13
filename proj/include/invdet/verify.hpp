#pragma once

// Property suites run by `invdet verify` and by the test binaries. Random
// instances are keyed by (seed, suite, index) so a failing index can be
// replayed on its own.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "invdet/canonical.hpp"
#include "invdet/dimensions.hpp"

namespace invdet {

struct CheckResult {
  std::string name;
  std::size_t count = 0;
  std::size_t failures = 0;
  std::size_t allowed_failures = 0;
  double worst = 0.0;      // largest observed error (or KS statistic ratio)
  double tolerance = 0.0;
  std::string failing_instance;  // JSON text of the first failure, empty if none

  bool passed() const noexcept { return failures <= allowed_failures; }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<CheckResult> checks;

  bool passed() const noexcept;
  /// Summary as a JSON document.
  std::string to_json() const;
};

/// |a - b| / max(1, |a|, |b|).
double relative_error(double a, double b) noexcept;

/// Random (z, S) with S a complex Wishart matrix with K dof. Dimensions are
/// drawn from a fixed list that covers both m < N and m = N.
struct RandomInstance {
  Dimensions dims;
  SufficientStatistic stat;
};
RandomInstance make_random_instance(std::uint64_t seed, std::uint64_t stream, std::size_t index);

/// Dimension sets used by make_random_instance.
const std::vector<Dimensions>& instance_dimensions();

SuiteReport run_invariance_suite(std::uint64_t seed, std::size_t trials,
                                 std::optional<std::size_t> only = std::nullopt);
SuiteReport run_maximality_suite(std::uint64_t seed, std::size_t trials,
                                 std::optional<std::size_t> only = std::nullopt);
SuiteReport run_identity_suite(std::uint64_t seed, std::size_t trials,
                               std::optional<std::size_t> only = std::nullopt);
/// KS tests with `trials` samples per seed over 20 seeds, at most one failure
/// per law.
SuiteReport run_distribution_suite(std::uint64_t seed, std::size_t trials, int threads = 1);

/// Runs the suite named "invariance", "maximality", "distributions" or
/// "identities". Throws InvalidArgument for other names.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, std::size_t trials,
                      std::optional<std::size_t> only = std::nullopt, int threads = 1);

}  // namespace invdet
