#include <cmath>

#include "helpers.hpp"
#include "invdet/montecarlo.hpp"
#include "invdet/performance.hpp"

using namespace invdet;

namespace {

ExperimentSpec desk_spec(const Dimensions& d) {
  DopplerScenarioSpec s;
  s.dims = d;
  ExperimentSpec spec;
  spec.scenario = build_doppler_scenario(s);
  spec.detectors = {DetectorKind::of(DetectorTag::Glrt)};
  spec.sinr_grid_db = {12.0};
  spec.trials_threshold = 20000;
  spec.trials_pd = 2000;
  spec.seed = 99;
  return spec;
}

bool same_curves(const std::vector<PerformanceCurve>& a, const std::vector<PerformanceCurve>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].detector == b[i].detector) || a[i].eta != b[i].eta ||
        a[i].achieved_pfa != b[i].achieved_pfa || a[i].rows.size() != b[i].rows.size()) {
      return false;
    }
    for (std::size_t j = 0; j < a[i].rows.size(); ++j) {
      const CurveRow& x = a[i].rows[j];
      const CurveRow& y = b[i].rows[j];
      if (x.sinr_db != y.sinr_db || x.eta != y.eta || x.pd_closed != y.pd_closed ||
          x.pd_mc != y.pd_mc || x.pd_stderr != y.pd_stderr) {
        return false;
      }
    }
  }
  return true;
}

const Dimensions kFig1{8, 12, 2, 4};

}  // namespace

TEST_CASE("keyed streams are order independent") {
  RandomStream a = RandomStream::keyed(1, 2, 3);
  RandomStream b = RandomStream::keyed(1, 2, 3);
  RandomStream c = RandomStream::keyed(1, 2, 4);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
  CHECK(pd_stream(8.0) != pd_stream(12.0));
  CHECK(pd_stream(8.0) != kThresholdStream);
}

TEST_CASE("simulation does not depend on the thread count") {
  const TrialModel model = TrialModel::make(desk_spec(kFig1).scenario, 30.0);
  const auto one = simulate_invariants(model, Hypothesis::H1, 5.0, 3001, 7, 3, 1);
  const auto four = simulate_invariants(model, Hypothesis::H1, 5.0, 3001, 7, 3, 4);
  CHECK(one.p1 == four.p1);
  CHECK(one.p2 == four.p2);
  for (std::size_t i = 0; i < one.size(); ++i) {
    REQUIRE(one.p1[i] > 0.0);
    REQUIRE(one.p1[i] <= 1.0);
  }

  ExperimentSpec spec = desk_spec(kFig1);
  spec.detectors = {DetectorKind::of(DetectorTag::Glrt), DetectorKind::mpid(0.0)};
  spec.sinr_grid_db = {6.0, 12.0};
  spec.monte_carlo_all = true;
  spec.threads = 1;
  const auto serial = run_experiment(spec);
  spec.threads = 3;
  const auto parallel = run_experiment(spec);
  CHECK(same_curves(serial, parallel));
  CHECK(same_curves(serial, run_experiment(spec)));
}

TEST_CASE("order statistic calibration") {
  SUBCASE("uniform p1 through the GLRT map") {
    // GLRT statistic 1/p1 - 1 with p1 uniform: the median is 1
    RandomStream rng(81);
    InvariantSamples s;
    const std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i) {
      s.p1.push_back(1.0 - rng.uniform());
      s.p2.push_back(0.5);
    }
    const double eta = calibrate_threshold(s, DetectorKind::of(DetectorTag::Glrt), kFig1, 0.5);
    // density of 1/p1 - 1 at 1 is 1/4; order-statistic sd = sqrt(0.25/n)/(1/4)
    CHECK(std::abs(eta - 1.0) <= 4.0 * std::sqrt(0.25 / n) * 4.0);
    CHECK_THROWS_KIND(calibrate_threshold(s, DetectorKind::of(DetectorTag::Glrt), kFig1, 1e-3),
                      ErrorKind::InsufficientTrials);
  }
  SUBCASE("GLRT against the closed-form inversion") {
    ExperimentSpec spec = desk_spec(kFig1);
    spec.pfa = 1e-2;
    spec.trials_threshold = 100000;
    const DetectorKind glrt = DetectorKind::of(DetectorTag::Glrt);
    const double mc = calibrate_threshold_mc(spec, glrt);
    const double exact = invert_threshold(glrt, kFig1, spec.pfa);
    const double h = 1e-4;
    const double density = (pfa(glrt, exact - h, kFig1) - pfa(glrt, exact + h, kFig1)) / (2.0 * h);
    const double sd = std::sqrt(spec.pfa * (1.0 - spec.pfa) / spec.trials_threshold) / density;
    CHECK(std::abs(mc - exact) <= 3.0 * sd);
    CHECK(mc == calibrate_threshold_mc(spec, glrt));
  }
}

TEST_CASE("detection estimates") {
  ExperimentSpec spec = desk_spec(kFig1);
  const DetectorKind glrt = DetectorKind::of(DetectorTag::Glrt);
  const double eta = invert_threshold(glrt, kFig1, spec.pfa);
  SUBCASE("saturation at very high SINR") {
    const PdEstimate e = estimate_pd(spec, glrt, eta, 60.0);
    CHECK(e.pd == 1.0);
    CHECK(e.std_error == 0.0);
    CHECK(e.trials == spec.trials_pd);
  }
  SUBCASE("zero signal gives the false alarm rate") {
    spec.trials_pd = 20000;
    const PdEstimate e = estimate_pd(spec, glrt, eta, -400.0);
    CHECK(std::abs(e.pd - spec.pfa) <= 3.0 * std::sqrt(spec.pfa * (1 - spec.pfa) / 20000.0));
  }
  SUBCASE("closed form agreement") {
    spec.trials_pd = 5000;
    const PdEstimate e = estimate_pd(spec, glrt, eta, 12.0);
    CHECK(std::abs(e.pd - pd(glrt, eta, kFig1, db_to_linear(12.0))) <= 0.02);
    CHECK(e.std_error == doctest::Approx(std::sqrt(e.pd * (1 - e.pd) / 5000.0)));
  }
}

TEST_CASE("run_experiment") {
  ExperimentSpec spec = desk_spec(kFig1);
  SUBCASE("single point closed form") {
    const auto curves = run_experiment(spec);
    REQUIRE(curves.size() == 1);
    REQUIRE(curves[0].rows.size() == 1);
    CHECK(curves[0].rows[0].pd_closed.has_value());
    CHECK_FALSE(curves[0].rows[0].pd_mc.has_value());
    CHECK(curves[0].eta.has_value());
  }
  SUBCASE("simulated single point") {
    spec.monte_carlo_all = true;
    spec.trials_pd = 5000;
    const auto curves = run_experiment(spec);
    const CurveRow& row = curves.at(0).rows.at(0);
    REQUIRE(row.pd_mc.has_value());
    CHECK(std::abs(*row.pd_mc - *row.pd_closed) <= 0.02);
    CHECK(*row.pd_stderr == doctest::Approx(std::sqrt(*row.pd_mc * (1 - *row.pd_mc) / 5000.0)));
    CHECK(curves[0].achieved_pfa.has_value());
  }
  SUBCASE("MPID is recalibrated per SINR") {
    spec.detectors = {DetectorKind::mpid(0.0)};
    spec.sinr_grid_db = {4.0, 16.0};
    const auto curves = run_experiment(spec);
    REQUIRE(curves.at(0).rows.size() == 2);
    CHECK_FALSE(curves[0].eta.has_value());
    CHECK(curves[0].rows[0].eta != curves[0].rows[1].eta);
    CHECK(curves[0].rows[0].pd_mc.has_value());
    CHECK_FALSE(curves[0].rows[0].pd_closed.has_value());
    CHECK(*curves[0].rows[1].pd_mc >= *curves[0].rows[0].pd_mc);
  }
  SUBCASE("empty detector list") {
    spec.detectors.clear();
    CHECK(run_experiment(spec).empty());
  }
  SUBCASE("validation") {
    spec.sinr_grid_db.clear();
    CHECK_THROWS_KIND(run_experiment(spec), ErrorKind::ConfigError);
    spec.sinr_grid_db = {3.0, 3.0};
    CHECK_THROWS_KIND(run_experiment(spec), ErrorKind::ConfigError);
    spec.sinr_grid_db = {3.0};
    spec.pfa = 1.0;
    CHECK_THROWS_KIND(run_experiment(spec), ErrorKind::ConfigError);
    spec.pfa = 1e-2;
    spec.monte_carlo_all = true;
    spec.trials_threshold = 5000;
    CHECK_THROWS_KIND(run_experiment(spec), ErrorKind::InsufficientTrials);
  }
}
