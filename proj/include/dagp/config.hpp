#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dagp/algorithms.hpp"

namespace dagp {

/// Parse or validation failure. `line` is 0 when the error is not tied to one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct AlgorithmConfig {
  std::string name;
  HyperParams params;

  friend bool operator==(const AlgorithmConfig&, const AlgorithmConfig&) = default;
};

struct CertifyConfig {
  double eta = 0.5;
  std::vector<double> c_values{0.0, 1.0, 10.0};
  std::vector<double> beta_values{0.1, 1.0, 10.0};
  std::vector<double> z_radii{1e-2, 1e-3, 1e-4};
  int z_phases = 8;
  double epsilon = 1e-6;

  friend bool operator==(const CertifyConfig&, const CertifyConfig&) = default;
};

/**
 * Flat `key = value` text with optional `[algorithm.<name>]` and `[certify]`
 * sections. `#` starts a comment.
 *
 *   experiment = synthetic_constrained
 *   m = 20
 *   M = 10
 *   [algorithm.dagp]
 *   mu = 0.05
 */
struct ExperimentConfig {
  std::string experiment = "synthetic_constrained";  // or "logistic"
  int m = 0;
  int M = 0;
  int samples_per_node = 40;
  double edge_prob = 0.3;
  std::uint64_t graph_seed = 1;
  std::string graph_file;  // overrides the random graph when set
  std::uint64_t instance_seed = 1;
  std::uint64_t init_seed = 1;
  std::size_t iterations = 1000;
  std::size_t trace_every = 10;
  std::string output_dir = "out";
  int reference_iters = 200000;
  double reference_tol = 1e-12;
  int dykstra_iters = 500;
  double dykstra_tol = 1e-9;
  int workers = 1;
  int reference_node = -1;  // >= 0 enables the per-node consensus file
  std::vector<AlgorithmConfig> algorithms;
  CertifyConfig certify;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);
/// Throws ConfigError naming the offending field.
void validate_config(const ExperimentConfig& config);

}  // namespace dagp
