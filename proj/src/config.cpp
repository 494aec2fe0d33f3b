#include "dagp/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dagp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a number, got '" + value + "'", line);
  }
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value, int line) {
  Int out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("'" + key + "' expects an integer, got '" + value + "'", line);
  }
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& value, int line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item), line));
  if (out.empty()) throw ConfigError("'" + key + "' expects a comma-separated list", line);
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out += ", ";
    out += fmt17(values[k]);
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& top_level_keys() {
  static const std::map<std::string, Setter> keys = {
      {"experiment", [](auto& c, const auto& v, int) { c.experiment = v; }},
      {"m", [](auto& c, const auto& v, int l) { c.m = to_int<int>("m", v, l); }},
      {"M", [](auto& c, const auto& v, int l) { c.M = to_int<int>("M", v, l); }},
      {"samples_per_node",
       [](auto& c, const auto& v, int l) { c.samples_per_node = to_int<int>("samples_per_node", v, l); }},
      {"edge_prob", [](auto& c, const auto& v, int l) { c.edge_prob = to_double("edge_prob", v, l); }},
      {"graph_seed",
       [](auto& c, const auto& v, int l) { c.graph_seed = to_int<std::uint64_t>("graph_seed", v, l); }},
      {"graph_file", [](auto& c, const auto& v, int) { c.graph_file = v; }},
      {"instance_seed",
       [](auto& c, const auto& v, int l) { c.instance_seed = to_int<std::uint64_t>("instance_seed", v, l); }},
      {"init_seed",
       [](auto& c, const auto& v, int l) { c.init_seed = to_int<std::uint64_t>("init_seed", v, l); }},
      {"iterations",
       [](auto& c, const auto& v, int l) { c.iterations = to_int<std::size_t>("iterations", v, l); }},
      {"trace_every",
       [](auto& c, const auto& v, int l) { c.trace_every = to_int<std::size_t>("trace_every", v, l); }},
      {"output_dir", [](auto& c, const auto& v, int) { c.output_dir = v; }},
      {"reference_iters",
       [](auto& c, const auto& v, int l) { c.reference_iters = to_int<int>("reference_iters", v, l); }},
      {"reference_tol",
       [](auto& c, const auto& v, int l) { c.reference_tol = to_double("reference_tol", v, l); }},
      {"dykstra_iters",
       [](auto& c, const auto& v, int l) { c.dykstra_iters = to_int<int>("dykstra_iters", v, l); }},
      {"dykstra_tol", [](auto& c, const auto& v, int l) { c.dykstra_tol = to_double("dykstra_tol", v, l); }},
      {"workers", [](auto& c, const auto& v, int l) { c.workers = to_int<int>("workers", v, l); }},
      {"reference_node",
       [](auto& c, const auto& v, int l) { c.reference_node = to_int<int>("reference_node", v, l); }},
  };
  return keys;
}

using CertifySetter = std::function<void(CertifyConfig&, const std::string&, int)>;

const std::map<std::string, CertifySetter>& certify_keys() {
  static const std::map<std::string, CertifySetter> keys = {
      {"eta", [](auto& c, const auto& v, int l) { c.eta = to_double("eta", v, l); }},
      {"c_values", [](auto& c, const auto& v, int l) { c.c_values = to_list("c_values", v, l); }},
      {"beta_values", [](auto& c, const auto& v, int l) { c.beta_values = to_list("beta_values", v, l); }},
      {"z_radii", [](auto& c, const auto& v, int l) { c.z_radii = to_list("z_radii", v, l); }},
      {"z_phases", [](auto& c, const auto& v, int l) { c.z_phases = to_int<int>("z_phases", v, l); }},
      {"epsilon", [](auto& c, const auto& v, int l) { c.epsilon = to_double("epsilon", v, l); }},
  };
  return keys;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  enum class Section { Top, Algorithm, Certify } section = Section::Top;
  AlgorithmConfig* algorithm = nullptr;
  std::set<std::string> seen;

  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;

    if (content.front() == '[') {
      if (content.back() != ']') throw ConfigError("unterminated section header", line);
      const std::string name = trim(content.substr(1, content.size() - 2));
      if (name == "certify") {
        section = Section::Certify;
      } else if (name.rfind("algorithm.", 0) == 0) {
        const std::string algo = name.substr(std::string("algorithm.").size());
        if (!is_known_algorithm(algo)) throw ConfigError("unknown algorithm '" + algo + "'", line);
        for (const auto& a : config.algorithms) {
          if (a.name == algo) throw ConfigError("duplicate algorithm '" + algo + "'", line);
        }
        config.algorithms.push_back({algo, default_hyperparameters(algo)});
        algorithm = &config.algorithms.back();
        section = Section::Algorithm;
      } else {
        throw ConfigError("unknown section '" + name + "'", line);
      }
      seen.clear();
      continue;
    }

    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line);

    switch (section) {
      case Section::Top: {
        const auto& keys = top_level_keys();
        const auto it = keys.find(key);
        if (it == keys.end()) throw ConfigError("unknown key '" + key + "'", line);
        it->second(config, value, line);
        break;
      }
      case Section::Certify: {
        const auto& keys = certify_keys();
        const auto it = keys.find(key);
        if (it == keys.end()) throw ConfigError("unknown key '" + key + "' in [certify]", line);
        it->second(config.certify, value, line);
        break;
      }
      case Section::Algorithm: {
        if (!algorithm->params.contains(key)) {
          throw ConfigError("unknown key '" + key + "' for algorithm '" + algorithm->name + "'", line);
        }
        algorithm->params[key] = to_double(key, value, line);
        break;
      }
    }
  }
  validate_config(config);
  return config;
}

void validate_config(const ExperimentConfig& c) {
  if (c.experiment != "synthetic_constrained" && c.experiment != "logistic") {
    throw ConfigError("experiment: expected 'synthetic_constrained' or 'logistic', got '" +
                      c.experiment + "'");
  }
  if (c.m < 1) throw ConfigError("m: must be a positive integer");
  if (c.M < 1) throw ConfigError("M: must be a positive integer");
  if (c.samples_per_node < 1) throw ConfigError("samples_per_node: must be positive");
  if (!(c.edge_prob >= 0.0 && c.edge_prob <= 1.0)) throw ConfigError("edge_prob: must lie in [0, 1]");
  if (c.iterations < 1) throw ConfigError("iterations: must be positive");
  if (c.trace_every < 1) throw ConfigError("trace_every: must be positive");
  if (c.reference_iters < 1) throw ConfigError("reference_iters: must be positive");
  if (!(c.reference_tol > 0.0)) throw ConfigError("reference_tol: must be positive");
  if (c.dykstra_iters < 1) throw ConfigError("dykstra_iters: must be positive");
  if (!(c.dykstra_tol > 0.0)) throw ConfigError("dykstra_tol: must be positive");
  if (c.workers < 1) throw ConfigError("workers: must be positive");
  if (c.reference_node >= c.M) throw ConfigError("reference_node: must be below M");
  if (c.output_dir.empty()) throw ConfigError("output_dir: must not be empty");
  if (c.algorithms.empty()) throw ConfigError("algorithms: at least one [algorithm.<name>] section is required");
  for (const auto& a : c.algorithms) {
    for (const auto& [key, value] : a.params) {
      if (!(value > 0.0)) throw ConfigError("algorithm." + a.name + "." + key + ": must be positive");
    }
  }
  if (!(c.certify.eta > 0.0)) throw ConfigError("certify.eta: must be positive");
  if (c.certify.z_phases < 1) throw ConfigError("certify.z_phases: must be positive");
  for (const double v : c.certify.c_values) {
    if (v < 0.0) throw ConfigError("certify.c_values: must be nonnegative");
  }
  for (const double v : c.certify.beta_values) {
    if (!(v > 0.0)) throw ConfigError("certify.beta_values: must be positive");
  }
  for (const double v : c.certify.z_radii) {
    if (!(v > 0.0)) throw ConfigError("certify.z_radii: must be positive");
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "experiment = " << c.experiment << '\n'
     << "m = " << c.m << '\n'
     << "M = " << c.M << '\n'
     << "samples_per_node = " << c.samples_per_node << '\n'
     << "edge_prob = " << fmt17(c.edge_prob) << '\n'
     << "graph_seed = " << c.graph_seed << '\n';
  if (!c.graph_file.empty()) os << "graph_file = " << c.graph_file << '\n';
  os << "instance_seed = " << c.instance_seed << '\n'
     << "init_seed = " << c.init_seed << '\n'
     << "iterations = " << c.iterations << '\n'
     << "trace_every = " << c.trace_every << '\n'
     << "output_dir = " << c.output_dir << '\n'
     << "reference_iters = " << c.reference_iters << '\n'
     << "reference_tol = " << fmt17(c.reference_tol) << '\n'
     << "dykstra_iters = " << c.dykstra_iters << '\n'
     << "dykstra_tol = " << fmt17(c.dykstra_tol) << '\n'
     << "workers = " << c.workers << '\n'
     << "reference_node = " << c.reference_node << '\n';
  for (const auto& a : c.algorithms) {
    os << "\n[algorithm." << a.name << "]\n";
    for (const auto& [key, value] : a.params) os << key << " = " << fmt17(value) << '\n';
  }
  os << "\n[certify]\n"
     << "eta = " << fmt17(c.certify.eta) << '\n'
     << "c_values = " << join(c.certify.c_values) << '\n'
     << "beta_values = " << join(c.certify.beta_values) << '\n'
     << "z_radii = " << join(c.certify.z_radii) << '\n'
     << "z_phases = " << c.certify.z_phases << '\n'
     << "epsilon = " << fmt17(c.certify.epsilon) << '\n';
  return os.str();
}

}  // namespace dagp
