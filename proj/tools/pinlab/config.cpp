#include "pinlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pinlab/output.hpp"

namespace pinlab {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {"dimension", "window_radius", "lambda_pin", "v0_entries", "m1_bound",
                                          "seed",      "lambda",        "tol_sup",    "max_depth",  "all_plus",
                                          "nu_horizon", "k1_hat"};

const json& require(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ConfigError("missing required key '" + key + "'");
  return doc.at(key);
}

double as_real(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("key '" + key + "': expected a number");
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("key '" + key + "': expected an integer");
  return v.get<std::int64_t>();
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

pinning::PotentialSpec ExperimentConfig::spec() const {
  try {
    return pinning::PotentialSpec(dimension, v0_entries, lambda_pin, m1_bound);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

pinning::Environment ExperimentConfig::environment() const {
  if (all_plus) return pinning::Environment::constant(1, -kEnvironmentSpan, kEnvironmentSpan);
  return pinning::sample_environment(seed, -kEnvironmentSpan, kEnvironmentSpan);
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("parse error at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'");

  ExperimentConfig c;
  c.raw = text;
  c.config_hash = hex64(fnv1a64(text));
  c.dimension = static_cast<int>(as_integer(require(doc, "dimension"), "dimension"));
  c.window_radius = static_cast<int>(as_integer(require(doc, "window_radius"), "window_radius"));
  c.lambda_pin = as_real(require(doc, "lambda_pin"), "lambda_pin");
  c.m1_bound = as_real(require(doc, "m1_bound"), "m1_bound");
  const json& seed = require(doc, "seed");
  if (!seed.is_number_unsigned()) throw ConfigError("key 'seed': expected a nonnegative integer");
  c.seed = seed.get<std::uint64_t>();

  if (c.dimension < 1) throw ConfigError("key 'dimension': must be >= 1");
  if (c.window_radius < 1) throw ConfigError("key 'window_radius': must be >= 1");

  if (doc.contains("v0_entries")) {
    const json& entries = doc.at("v0_entries");
    if (!entries.is_array()) throw ConfigError("key 'v0_entries': expected a list of {point, value}");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string where = "v0_entries[" + std::to_string(i) + "]";
      const json& e = entries[i];
      if (!e.is_object() || !e.contains("point") || !e.contains("value"))
        throw ConfigError("key '" + where + "': expected {\"point\": [...], \"value\": x}");
      const json& p = e.at("point");
      if (!p.is_array() || p.size() != static_cast<std::size_t>(c.dimension))
        throw ConfigError("key '" + where + ".point': expected " + std::to_string(c.dimension) + " integers");
      pinning::Point x;
      for (const auto& k : p) x.push_back(static_cast<int>(as_integer(k, where + ".point")));
      if (!c.v0_entries.emplace(x, as_real(e.at("value"), where + ".value")).second)
        throw ConfigError("key '" + where + "': duplicate point " + pinning::to_string(x));
    }
  }
  if (doc.contains("lambda")) c.lambda = as_real(doc.at("lambda"), "lambda");
  if (doc.contains("tol_sup")) c.tol_sup = as_real(doc.at("tol_sup"), "tol_sup");
  if (doc.contains("max_depth")) c.max_depth = static_cast<int>(as_integer(doc.at("max_depth"), "max_depth"));
  if (doc.contains("all_plus")) {
    if (!doc.at("all_plus").is_boolean()) throw ConfigError("key 'all_plus': expected true or false");
    c.all_plus = doc.at("all_plus").get<bool>();
  }
  if (doc.contains("nu_horizon")) c.nu_horizon = static_cast<int>(as_integer(doc.at("nu_horizon"), "nu_horizon"));
  if (doc.contains("k1_hat")) c.k1_hat = as_real(doc.at("k1_hat"), "k1_hat");

  if (!(c.tol_sup > 0)) throw ConfigError("key 'tol_sup': must be positive");
  if (c.max_depth < 8) throw ConfigError("key 'max_depth': must be >= 8");
  if (c.nu_horizon < 1) throw ConfigError("key 'nu_horizon': must be >= 1");
  if (!(c.k1_hat >= 0.5)) throw ConfigError("key 'k1_hat': must be >= 0.5");
  c.spec();  // validates the potential
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pinlab
