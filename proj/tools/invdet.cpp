// invdet: closed-form sweeps, Monte Carlo experiments and property suites.
//
// Exit codes: 0 success, 1 property failure, 2 usage or config error,
// 3 numerical failure.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "invdet/config.hpp"
#include "invdet/montecarlo.hpp"
#include "invdet/performance.hpp"
#include "invdet/verify.hpp"

namespace {

using nlohmann::json;
using namespace invdet;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::DuplicateFrequency:
    case ErrorKind::InsufficientTrials:
    case ErrorKind::ZeroDirection:
      return kExitUsage;
    case ErrorKind::SelfCheckFailed:
    case ErrorKind::InvariantMismatch:
      return kExitPropertyFailure;
    default:
      return kExitNumerical;
  }
}

// Shortest round-trip decimal form; never depends on the C locale.
std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string();
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// Writes to the output path, or stdout when empty.
void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write output '" + path + "'");
  out << text;
}

std::string curves_csv(const std::vector<PerformanceCurve>& curves) {
  std::ostringstream out;
  out << "detector,sinr_db,eta,pd_closed,pd_mc,pd_stderr\n";
  for (const auto& c : curves) {
    for (const auto& row : c.rows) {
      out << c.detector.name() << ',' << format_number(row.sinr_db) << ',' << format_number(row.eta)
          << ',' << format_optional(row.pd_closed) << ',' << format_optional(row.pd_mc) << ','
          << format_optional(row.pd_stderr) << '\n';
    }
  }
  return out.str();
}

std::string curves_json(const std::vector<PerformanceCurve>& curves, const ExperimentSpec& spec) {
  json doc;
  const Dimensions& d = spec.scenario.dims;
  doc["dims"] = {{"N", d.channels}, {"K", d.snapshots}, {"r", d.signal_rank}, {"t", d.jammer_rank}};
  doc["pfa"] = spec.pfa;
  doc["seed"] = spec.seed;
  doc["curves"] = json::array();
  for (const auto& c : curves) {
    json cj;
    cj["detector"] = c.detector.name();
    cj["eta"] = optional_json(c.eta);
    cj["achieved_pfa"] = optional_json(c.achieved_pfa);
    cj["rows"] = json::array();
    for (const auto& row : c.rows) {
      cj["rows"].push_back({{"sinr_db", row.sinr_db},
                            {"eta", row.eta},
                            {"pd_closed", optional_json(row.pd_closed)},
                            {"pd_mc", optional_json(row.pd_mc)},
                            {"pd_stderr", optional_json(row.pd_stderr)}});
    }
    doc["curves"].push_back(cj);
  }
  return doc.dump(2) + "\n";
}

struct PfaArgs {
  std::string detector = "glrt";
  int n = 0, k = 0, r = 0, t = 0;
  std::vector<double> etas;
  std::optional<double> pfa;
  std::string format = "json";
  std::string output;
};

int run_pfa(const PfaArgs& a) {
  const Dimensions dims{a.n, a.k, a.r, a.t};
  dims.validate();
  const DetectorKind kind = DetectorKind::parse(a.detector);
  if (kind.tag == DetectorTag::Mpid) {
    throw Error(ErrorKind::InvalidArgument, "the MPID has no closed-form Pfa; use simulate");
  }
  if (a.etas.empty() == !a.pfa.has_value()) {
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --eta or --pfa");
  }
  std::vector<std::pair<double, double>> points;
  if (a.pfa) {
    points.emplace_back(invert_threshold(kind, dims, *a.pfa), *a.pfa);
  } else {
    for (double eta : a.etas) points.emplace_back(eta, pfa(kind, eta, dims));
  }
  if (a.format == "csv") {
    std::ostringstream out;
    out << "detector,eta,pfa\n";
    for (const auto& [eta, p] : points) {
      out << kind.name() << ',' << format_number(eta) << ',' << format_number(p) << '\n';
    }
    emit(out.str(), a.output);
  } else {
    json doc;
    doc["detector"] = kind.name();
    doc["N"] = dims.channels;
    doc["K"] = dims.snapshots;
    doc["r"] = dims.signal_rank;
    doc["t"] = dims.jammer_rank;
    doc["points"] = json::array();
    for (const auto& [eta, p] : points) doc["points"].push_back({{"eta", eta}, {"pfa", p}});
    emit(doc.dump(2) + "\n", a.output);
  }
  return kExitOk;
}

struct CurveArgs {
  std::string config;
  int threads = 1;
  std::string output;
  std::string format;
  bool full_scale = false;
};

int run_curve(const CurveArgs& a, bool monte_carlo_all) {
  ExperimentConfig config = load_config(a.config);
  if (a.full_scale) {
    config.pfa = 1e-4;
    config.trials_threshold = std::max<std::size_t>(config.trials_threshold, 1000000);
  }
  const ExperimentSpec spec = make_experiment(config, a.threads, monte_carlo_all);
  const auto curves = run_experiment(spec);
  const std::string format = !a.format.empty() ? a.format : config.output_format.value_or("csv");
  const std::string path = !a.output.empty() ? a.output : config.output_path.value_or("");
  emit(format == "json" ? curves_json(curves, spec) : curves_csv(curves), path);
  return kExitOk;
}

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> instance;
  int threads = 1;
  std::string output;
};

std::size_t default_trials(const std::string& suite) {
  if (suite == "maximality") return 200;
  if (suite == "distributions") return 10000;
  return 1000;
}

int run_verify(const VerifyArgs& a) {
  const SuiteReport report =
      run_suite(a.suite, a.seed, a.trials.value_or(default_trials(a.suite)), a.instance, a.threads);
  emit(report.to_json() + "\n", a.output);
  return report.passed() ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant detection of subspace signals: closed forms, simulation, verification"};
  app.require_subcommand(1);

  PfaArgs pfa_args;
  auto* pfa_cmd = app.add_subcommand("pfa", "False alarm probability or threshold from closed forms");
  pfa_cmd->add_option("--detector", pfa_args.detector, "glrt, 2s-glrt, lmpid or ed")
      ->check(CLI::IsMember({"glrt", "2s-glrt", "lmpid", "ed", "mpid"}));
  pfa_cmd->add_option("--N", pfa_args.n, "channels")->required();
  pfa_cmd->add_option("--K", pfa_args.k, "secondary snapshots")->required();
  pfa_cmd->add_option("--r", pfa_args.r, "signal rank")->required();
  pfa_cmd->add_option("--t", pfa_args.t, "jammer rank")->required();
  auto* eta_opt = pfa_cmd->add_option("--eta", pfa_args.etas, "threshold(s) to evaluate");
  auto* target_opt = pfa_cmd->add_option("--pfa", pfa_args.pfa, "target Pfa to invert");
  eta_opt->excludes(target_opt);
  pfa_cmd->add_option("--format", pfa_args.format)->check(CLI::IsMember({"csv", "json"}));
  pfa_cmd->add_option("--output", pfa_args.output, "output file (default stdout)");

  CurveArgs curve_args;
  auto add_curve_options = [&](CLI::App* cmd) {
    cmd->add_option("config", curve_args.config, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--threads", curve_args.threads, "worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--output", curve_args.output, "output file (default from config or stdout)");
    cmd->add_option("--format", curve_args.format)->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--full-scale", curve_args.full_scale,
                  "Pfa = 1e-4 with 10^6 threshold trials instead of the config values");
  };
  auto* curve_cmd = app.add_subcommand(
      "pd-curve", "Pd versus SINR from the closed forms (Monte Carlo only for the MPID)");
  add_curve_options(curve_cmd);
  auto* sim_cmd =
      app.add_subcommand("simulate", "Pd versus SINR by Monte Carlo for every detector");
  add_curve_options(sim_cmd);

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Run a property suite");
  verify_cmd->add_option("--suite", verify_args.suite, "invariance, maximality, distributions, identities")
      ->required();
  verify_cmd->add_option("--seed", verify_args.seed);
  verify_cmd->add_option("--trials", verify_args.trials, "instances (samples per seed for distributions)");
  verify_cmd->add_option("--instance", verify_args.instance, "replay a single instance index");
  verify_cmd->add_option("--threads", verify_args.threads)->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--output", verify_args.output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*pfa_cmd) return run_pfa(pfa_args);
    if (*curve_cmd) return run_curve(curve_args, false);
    if (*sim_cmd) return run_curve(curve_args, true);
    if (*verify_cmd) {
      const std::vector<std::string> suites = {"invariance", "maximality", "distributions",
                                               "identities"};
      if (std::find(suites.begin(), suites.end(), verify_args.suite) == suites.end()) {
        std::cerr << "error: unknown suite '" << verify_args.suite << "'\n";
        return kExitUsage;
      }
      return run_verify(verify_args);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
