#include "invdet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace invdet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorKind::ConfigError, message); }

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "N",          "K",           "r",           "t",
      "signal_frequencies", "jammer_frequencies", "noise_power", "cnr_db",
      "inr_db",     "one_lag_corr", "pfa",        "sinr_grid_db",
      "trials_threshold", "trials_pd", "seed",    "detectors",
      "output_path", "output_format", "description"};
  return keys;
}

int get_int(const json& doc, const char* key) {
  if (!doc.contains(key)) fail(std::string("missing required key '") + key + "'");
  const json& v = doc.at(key);
  if (!v.is_number_integer()) fail(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

double get_number(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number()) fail(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& doc, const char* key, std::uint64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number_unsigned()) fail(std::string("'") + key + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> get_numbers(const json& doc, const char* key) {
  std::vector<double> out;
  if (!doc.contains(key)) return out;
  const json& v = doc.at(key);
  if (!v.is_array()) fail(std::string("'") + key + "' must be an array of numbers");
  for (const auto& x : v) {
    if (!x.is_number()) fail(std::string("'") + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::optional<std::string> get_string(const json& doc, const char* key) {
  if (!doc.contains(key)) return std::nullopt;
  const json& v = doc.at(key);
  if (!v.is_string()) fail(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!known_keys().count(item.key())) fail("unknown key '" + item.key() + "'");
  }

  ExperimentConfig c;
  c.dims.channels = get_int(doc, "N");
  c.dims.snapshots = get_int(doc, "K");
  c.dims.signal_rank = get_int(doc, "r");
  c.dims.jammer_rank = get_int(doc, "t");
  try {
    c.dims.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  c.signal_frequencies = get_numbers(doc, "signal_frequencies");
  c.jammer_frequencies = get_numbers(doc, "jammer_frequencies");
  c.noise_power = get_number(doc, "noise_power", c.noise_power);
  c.cnr_db = get_number(doc, "cnr_db", c.cnr_db);
  c.inr_db = get_number(doc, "inr_db", c.inr_db);
  c.one_lag_corr = get_number(doc, "one_lag_corr", c.one_lag_corr);
  c.pfa = get_number(doc, "pfa", c.pfa);
  if (!doc.contains("sinr_grid_db")) fail("missing required key 'sinr_grid_db'");
  c.sinr_grid_db = get_numbers(doc, "sinr_grid_db");
  c.trials_threshold = get_count(doc, "trials_threshold", c.trials_threshold);
  c.trials_pd = get_count(doc, "trials_pd", c.trials_pd);
  c.seed = get_count(doc, "seed", c.seed);

  if (!doc.contains("detectors") || !doc.at("detectors").is_array()) {
    fail("'detectors' must be an array of detector names");
  }
  for (const auto& d : doc.at("detectors")) {
    if (!d.is_string()) fail("'detectors' must be an array of detector names");
    const auto name = d.get<std::string>();
    try {
      DetectorKind::parse(name);
    } catch (const Error& e) {
      fail(e.what());
    }
    c.detectors.push_back(name);
  }
  c.output_path = get_string(doc, "output_path");
  c.output_format = get_string(doc, "output_format");
  if (c.output_format && *c.output_format != "csv" && *c.output_format != "json") {
    fail("'output_format' must be \"csv\" or \"json\"");
  }
  get_string(doc, "description");  // free text, type-checked only

  if (!(c.pfa > 0.0 && c.pfa < 1.0)) fail("'pfa' must lie in (0, 1)");
  if (c.sinr_grid_db.empty()) fail("'sinr_grid_db' must not be empty");
  for (std::size_t i = 1; i < c.sinr_grid_db.size(); ++i) {
    if (!(c.sinr_grid_db[i] > c.sinr_grid_db[i - 1])) fail("'sinr_grid_db' must be strictly increasing");
  }
  if (!(c.noise_power > 0.0)) fail("'noise_power' must be > 0");
  if (!(c.one_lag_corr >= 0.0 && c.one_lag_corr < 1.0)) fail("'one_lag_corr' must lie in [0, 1)");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ExperimentSpec make_experiment(const ExperimentConfig& config, int threads, bool monte_carlo_all) {
  DopplerScenarioSpec ds;
  ds.dims = config.dims;
  ds.signal_frequencies = config.signal_frequencies;
  ds.jammer_frequencies = config.jammer_frequencies;
  ds.noise_power = config.noise_power;
  ds.cnr_db = config.cnr_db;
  ds.one_lag_corr = config.one_lag_corr;

  ExperimentSpec spec;
  try {
    spec.scenario = build_doppler_scenario(ds);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DuplicateFrequency || e.kind() == ErrorKind::DomainError ||
        e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::DimensionMismatch) {
      fail(e.what());
    }
    throw;
  }
  for (const auto& name : config.detectors) spec.detectors.push_back(DetectorKind::parse(name));
  spec.pfa = config.pfa;
  spec.sinr_grid_db = config.sinr_grid_db;
  spec.trials_threshold = config.trials_threshold;
  spec.trials_pd = config.trials_pd;
  spec.seed = config.seed;
  spec.inr_db = config.inr_db;
  spec.threads = threads;
  spec.monte_carlo_all = monte_carlo_all;
  spec.validate();
  return spec;
}

}  // namespace invdet
