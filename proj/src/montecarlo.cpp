#include "invdet/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>

#include "invdet/invariant.hpp"
#include "invdet/kernels/kernels.hpp"
#include "invdet/performance.hpp"

namespace invdet {

namespace {

ComplexVector uniform_direction(Index n) {
  return ComplexVector::Ones(n) / std::sqrt(static_cast<double>(n));
}

int resolve_threads(int threads, std::size_t work) {
  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, n);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(work, 1)));
}

// Runs body(begin, end) over contiguous chunks on `threads` workers and
// rethrows the first exception.
template <typename Body>
void parallel_chunks(std::size_t count, int threads, Body body) {
  const int workers = resolve_threads(threads, count);
  if (workers == 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, chunk * static_cast<std::size_t>(w));
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool needs_simulation(const ExperimentSpec& spec, const DetectorKind& kind) {
  return spec.monte_carlo_all || !kind.has_closed_form();
}

}  // namespace

TrialModel TrialModel::make(const Scenario& scenario, double inr_db) {
  return make(scenario, uniform_direction(scenario.dims.signal_rank),
              uniform_direction(scenario.dims.jammer_rank), inr_db);
}

TrialModel TrialModel::make(const Scenario& scenario, const ComplexVector& signal_direction,
                            const ComplexVector& jammer_direction, double inr_db) {
  TrialModel model;
  model.scenario = scenario;
  model.cf = canonicalize(scenario);
  if (signal_direction.size() != scenario.dims.signal_rank) {
    throw Error(ErrorKind::DimensionMismatch, "signal direction must have length r");
  }
  const double norm = signal_direction.norm();
  if (norm == 0.0) throw Error(ErrorKind::ZeroDirection, "signal direction is zero");
  model.signal_direction = signal_direction / norm;
  model.jammer = scale_jammer_to_inr(scenario, model.cf, jammer_direction, inr_db);
  return model;
}

InvariantSamples simulate_invariants(const TrialModel& model, Hypothesis hypothesis, double sinr,
                                     std::size_t trials, std::uint64_t seed, std::uint64_t stream,
                                     int threads) {
  const Dimensions& dims = model.scenario.dims;
  InvariantSamples out;
  out.split = !dims.full_subspace();
  out.p1.resize(trials);
  if (out.split) out.p2.resize(trials);

  SignalParams base;
  base.target = hypothesis == Hypothesis::H1
                    ? scale_signal_to_sinr(model.cf, model.signal_direction, sinr)
                    : ComplexVector::Zero(dims.signal_rank);

  parallel_chunks(trials, threads, [&](std::size_t begin, std::size_t end) {
    SignalParams params = base;
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream rng = RandomStream::keyed(seed, stream, i);
      const double phase = 2.0 * std::numbers::pi * rng.uniform();
      params.jammer = model.jammer * std::polar(1.0, phase);
      const RawData data = synthesize_data(model.scenario, params, hypothesis, rng);
      const MaximalInvariant inv =
          compute_maximal_invariant(transform_data(model.cf, data.primary, data.secondary));
      if (inv.split()) {
        out.p1[i] = inv.p1;
        out.p2[i] = inv.p2;
      } else {
        out.p1[i] = inv.p3;
      }
    }
  });
  return out;
}

std::uint64_t pd_stream(double sinr_db) noexcept {
  return mix64(std::bit_cast<std::uint64_t>(sinr_db) ^ 0x9e3779b97f4a7c15ULL) | 1ULL;
}

void ExperimentSpec::validate() const {
  scenario.dims.validate();
  if (!(pfa > 0.0 && pfa < 1.0)) throw Error(ErrorKind::ConfigError, "pfa must lie in (0, 1)");
  if (sinr_grid_db.empty()) throw Error(ErrorKind::ConfigError, "SINR grid is empty");
  for (std::size_t i = 1; i < sinr_grid_db.size(); ++i) {
    if (!(sinr_grid_db[i] > sinr_grid_db[i - 1])) {
      throw Error(ErrorKind::ConfigError, "SINR grid must be strictly increasing");
    }
  }
  for (const auto& d : detectors) {
    if (d.tag == DetectorTag::Ed && !scenario.dims.full_subspace()) {
      throw Error(ErrorKind::ConfigError, "the ED requires r + t = N");
    }
    if (d.tag == DetectorTag::Mpid && scenario.dims.full_subspace()) {
      throw Error(ErrorKind::ConfigError, "the MPID requires r + t < N");
    }
  }
}

double calibrate_threshold(const InvariantSamples& h0, const DetectorKind& detector,
                           const Dimensions& dims, double pfa) {
  const auto trials = static_cast<double>(h0.size());
  if (!(pfa > 0.0 && pfa < 1.0)) throw Error(ErrorKind::InvalidArgument, "pfa must lie in (0, 1)");
  if (trials * pfa < 100.0) {
    throw Error(ErrorKind::InsufficientTrials,
                "need at least 100/pfa threshold trials, got " + std::to_string(h0.size()));
  }
  std::vector<double> stats;
  threshold_statistics(detector, dims, h0.p1, h0.p2, stats);
  const auto k = static_cast<std::size_t>(std::ceil(trials * pfa));
  // k-th largest = element at index k-1 in descending order
  auto nth = stats.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(stats.begin(), nth, stats.end(), std::greater<>());
  return *nth;
}

PdEstimate fraction_exceeding(const InvariantSamples& samples, const DetectorKind& detector,
                              const Dimensions& dims, double eta) {
  PdEstimate est;
  est.trials = samples.size();
  if (est.trials == 0) return est;
  std::vector<double> stats;
  threshold_statistics(detector, dims, samples.p1, samples.p2, stats);
  const std::size_t hits = kernels::count_exceeding(stats.data(), stats.size(), eta);
  est.pd = static_cast<double>(hits) / static_cast<double>(est.trials);
  est.std_error = std::sqrt(est.pd * (1.0 - est.pd) / static_cast<double>(est.trials));
  return est;
}

double calibrate_threshold_mc(const ExperimentSpec& spec, const DetectorKind& detector) {
  if (static_cast<double>(spec.trials_threshold) * spec.pfa < 100.0) {
    throw Error(ErrorKind::InsufficientTrials, "need at least 100/pfa threshold trials");
  }
  const TrialModel model = TrialModel::make(spec.scenario, spec.inr_db);
  const InvariantSamples h0 = simulate_invariants(model, Hypothesis::H0, 0.0, spec.trials_threshold,
                                                  spec.seed, kThresholdStream, spec.threads);
  return calibrate_threshold(h0, detector, spec.scenario.dims, spec.pfa);
}

PdEstimate estimate_pd(const ExperimentSpec& spec, const DetectorKind& detector, double eta,
                       double sinr_db) {
  const TrialModel model = TrialModel::make(spec.scenario, spec.inr_db);
  const InvariantSamples h1 =
      simulate_invariants(model, Hypothesis::H1, db_to_linear(sinr_db), spec.trials_pd, spec.seed,
                          pd_stream(sinr_db), spec.threads);
  return fraction_exceeding(h1, detector, spec.scenario.dims, eta);
}

std::vector<PerformanceCurve> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<PerformanceCurve> curves;
  if (spec.detectors.empty()) return curves;
  const Dimensions& dims = spec.scenario.dims;

  bool any_simulated = false;
  for (const auto& d : spec.detectors) any_simulated = any_simulated || needs_simulation(spec, d);

  std::optional<TrialModel> model;
  InvariantSamples h0;
  if (any_simulated) {
    if (static_cast<double>(spec.trials_threshold) * spec.pfa < 100.0) {
      throw Error(ErrorKind::InsufficientTrials, "need at least 100/pfa threshold trials");
    }
    model = TrialModel::make(spec.scenario, spec.inr_db);
    h0 = simulate_invariants(*model, Hypothesis::H0, 0.0, spec.trials_threshold, spec.seed,
                             kThresholdStream, spec.threads);
  }

  for (const auto& d : spec.detectors) {
    PerformanceCurve curve;
    curve.detector = d;
    if (d.has_closed_form()) {
      curve.eta = invert_threshold(d, dims, spec.pfa);
      if (needs_simulation(spec, d)) {
        curve.achieved_pfa = fraction_exceeding(h0, d, dims, *curve.eta).pd;
      }
    }
    curves.push_back(std::move(curve));
  }

  for (double sinr_db : spec.sinr_grid_db) {
    const double sinr = db_to_linear(sinr_db);
    std::optional<InvariantSamples> h1;
    if (any_simulated && spec.trials_pd > 0) {
      h1 = simulate_invariants(*model, Hypothesis::H1, sinr, spec.trials_pd, spec.seed,
                               pd_stream(sinr_db), spec.threads);
    }
    for (auto& curve : curves) {
      CurveRow row;
      row.sinr_db = sinr_db;
      DetectorKind d = curve.detector;
      if (d.tag == DetectorTag::Mpid) {
        d.sinr = sinr;
        row.eta = calibrate_threshold(h0, d, dims, spec.pfa);
      } else {
        row.eta = *curve.eta;
        row.pd_closed = pd(d, row.eta, dims, sinr);
      }
      if (h1 && needs_simulation(spec, d)) {
        const PdEstimate est = fraction_exceeding(*h1, d, dims, row.eta);
        row.pd_mc = est.pd;
        row.pd_stderr = est.std_error;
      }
      curve.rows.push_back(row);
    }
  }
  return curves;
}

}  // namespace invdet
