#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dagp/certificates.hpp"
#include "dagp/config.hpp"
#include "dagp/metrics.hpp"
#include "dagp/reference.hpp"

namespace dagp {

/// Filesystem failure while writing experiment outputs.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One or more algorithms hit a non-finite iterate; outputs were still written.
class ExperimentAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Graph, gossip pair, instance and reference shared by every algorithm.
struct ExperimentSetup {
  GossipPair gossip;
  KernelReport kernel;
  ProblemInstance instance;
  ReferenceSolution reference;
  NodeMatrix x0;
};

ExperimentSetup prepare_experiment(const ExperimentConfig& config);

struct ExperimentResult {
  ExperimentSetup setup;
  std::vector<std::pair<std::string, Trace>> traces;
  std::vector<std::string> aborted;
};

/**
 * Runs every configured algorithm from the same initial iterates. When
 * `write_outputs` is set, writes <alg>.csv per algorithm, metadata.json,
 * instance.json, graph.txt, W.csv, Q.csv and the SVG charts into
 * config.output_dir. Throws ExperimentAborted after writing if any algorithm
 * diverged.
 */
ExperimentResult run_experiment(const ExperimentConfig& config, bool write_outputs = true);

struct CertifyResult {
  KernelReport kernel;
  CertificateMatrices matrices;
  std::vector<Assumption5Report> scans;  // one per configured C
};

/// Kernel conditions and the eigenvalue scan, using the dagp hyperparameters
/// from the config (defaults if absent) and the instance's max smoothness.
CertifyResult certify_experiment(const ExperimentConfig& config);

std::string describe(const KernelReport& report);
std::string describe(const Assumption5Report& report);

/// Charts of objective, feasibility gap, consensus error, grad-sum norm and
/// optimality gap, one series per trace. Throws std::invalid_argument on an
/// empty trace list and IoError on write failures.
std::vector<std::filesystem::path> emit_plots(
    const std::vector<std::pair<std::string, Trace>>& traces, const std::filesystem::path& output_dir);

}  // namespace dagp
