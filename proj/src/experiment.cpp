#include "dagp/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dagp/run.hpp"

namespace dagp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<int> pick_tracked_nodes(int M, int reference, std::uint64_t seed) {
  std::vector<int> nodes;
  for (int v = 0; v < M; ++v) {
    if (v != reference) nodes.push_back(v);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  nodes.resize(std::min<std::size_t>(nodes.size(), 5));
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& body) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  body(out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

json kernel_json(const KernelReport& k) {
  return {{"kernel_dim_W", k.kernel_dim_W},
          {"kernel_W_is_ones", k.kernel_W_is_ones},
          {"kernel_dim_Q", k.kernel_dim_Q},
          {"kernel_dim_Wt", k.kernel_dim_Wt},
          {"max_principal_angle", k.max_principal_angle},
          {"kernels_match", k.kernels_match},
          {"min_qwx_ratio", k.min_qwx_ratio},
          {"qwx_spot_check", k.qwx_spot_check},
          {"tol", k.tol},
          {"passed", k.passed()}};
}

json reference_json(const ReferenceSolution& r) {
  return {{"x_star", std::vector<double>(r.x_star.data(), r.x_star.data() + r.x_star.size())},
          {"f_star", r.f_star},
          {"kkt_residual", r.kkt_residual},
          {"iterations_used", r.iterations_used},
          {"converged", r.converged}};
}

}  // namespace

ExperimentSetup prepare_experiment(const ExperimentConfig& config) {
  validate_config(config);
  DirectedGraph graph = config.graph_file.empty()
                            ? random_strongly_connected(config.M, config.edge_prob, config.graph_seed)
                            : load_edge_list(config.graph_file);
  if (graph.node_count() != config.M) {
    throw ConfigError("graph_file: node count " + std::to_string(graph.node_count()) +
                      " does not match M = " + std::to_string(config.M));
  }
  if (!is_strongly_connected(graph)) throw ConfigError("graph_file: graph is not strongly connected");

  ExperimentSetup setup{build_gossip_pair(graph), {}, {}, {}, {}};
  setup.kernel = verify_kernel_conditions(setup.gossip, 1e-8, 16, config.graph_seed);
  setup.instance = config.experiment == "logistic"
                       ? generate_logistic_instance(config.M, config.m, config.samples_per_node,
                                                    config.instance_seed)
                       : generate_synthetic_instance(config.m, config.M, config.instance_seed);
  ReferenceOptions ref;
  ref.max_iters = config.reference_iters;
  ref.tol = config.reference_tol;
  setup.reference = centralized_solve(setup.instance, ref);
  setup.x0 = random_initial_iterates(config.M, config.m, config.init_seed);
  return setup;
}

ExperimentResult run_experiment(const ExperimentConfig& config, bool write_outputs) {
  ExperimentResult result{prepare_experiment(config), {}, {}};
  const ExperimentSetup& setup = result.setup;
  const fs::path out_dir = config.output_dir;
  if (write_outputs) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  }

  RunOptions options;
  options.iterations = config.iterations;
  options.trace_every = config.trace_every;
  options.f_star = setup.reference.f_star;
  options.dykstra_iters = config.dykstra_iters;
  options.dykstra_tol = config.dykstra_tol;
  if (config.reference_node >= 0) {
    options.reference_node = config.reference_node;
    options.tracked_nodes = pick_tracked_nodes(config.M, config.reference_node, config.graph_seed);
  }

  json algorithms = json::array();
  for (const auto& algo : config.algorithms) {
    auto stepper = make_stepper(algo.name, algo.params, setup.instance, setup.gossip, config.workers);
    Trace trace;
    try {
      trace = run(*stepper, setup.x0, setup.instance, options);
    } catch (const RunAborted& e) {
      trace = e.partial();
      result.aborted.push_back(algo.name);
    }
    trace.meta.instance_seed = config.instance_seed;
    trace.meta.graph_seed = config.graph_seed;
    trace.meta.init_seed = config.init_seed;
    trace.meta.kernel = setup.kernel;

    json entry = {{"name", algo.name},
                  {"hyperparameters", trace.meta.hyperparameters},
                  {"records", trace.records.size()},
                  {"dykstra_converged", trace.meta.dykstra_converged}};
    entry["aborted_at"] = trace.meta.aborted_at ? json(*trace.meta.aborted_at) : json(nullptr);
    algorithms.push_back(entry);

    if (write_outputs) {
      write_file(out_dir / (algo.name + ".csv"), [&](std::ostream& os) { write_trace_csv(os, trace); });
      if (config.reference_node >= 0) {
        write_file(out_dir / (algo.name + "_nodes.csv"),
                   [&](std::ostream& os) { write_node_consensus_csv(os, trace); });
      }
    }
    result.traces.emplace_back(algo.name, std::move(trace));
  }

  if (write_outputs) {
    json meta = {{"experiment", config.experiment},
                 {"m", config.m},
                 {"M", config.M},
                 {"instance_seed", config.instance_seed},
                 {"graph_seed", config.graph_seed},
                 {"init_seed", config.init_seed},
                 {"iterations", config.iterations},
                 {"trace_every", config.trace_every},
                 {"edge_count", setup.gossip.graph.edge_count()},
                 {"kernel_report", kernel_json(setup.kernel)},
                 {"reference", reference_json(setup.reference)},
                 {"algorithms", algorithms},
                 {"config", serialize_config(config)}};
    if (!setup.kernel.passed()) {
      meta["warnings"] = json::array({"kernel conditions not satisfied: " + describe(setup.kernel)});
    }
    write_file(out_dir / "metadata.json", [&](std::ostream& os) { os << meta.dump(2) << '\n'; });
    write_file(out_dir / "instance.json",
               [&](std::ostream& os) { os << instance_to_json(setup.instance) << '\n'; });
    write_file(out_dir / "graph.txt",
               [&](std::ostream& os) { write_edge_list(os, setup.gossip.graph); });
    write_file(out_dir / "W.csv", [&](std::ostream& os) { write_matrix_csv(os, setup.gossip.W); });
    write_file(out_dir / "Q.csv", [&](std::ostream& os) { write_matrix_csv(os, setup.gossip.Q); });
    emit_plots(result.traces, out_dir);
  }

  if (!result.aborted.empty()) {
    std::string names;
    for (const auto& n : result.aborted) names += (names.empty() ? "" : ", ") + n;
    throw ExperimentAborted("non-finite iterates in: " + names);
  }
  return result;
}

CertifyResult certify_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const DirectedGraph graph =
      config.graph_file.empty() ? random_strongly_connected(config.M, config.edge_prob, config.graph_seed)
                                : load_edge_list(config.graph_file);
  const GossipPair gossip = build_gossip_pair(graph);
  const ProblemInstance inst =
      config.experiment == "logistic"
          ? generate_logistic_instance(config.M, config.m, config.samples_per_node, config.instance_seed)
          : generate_synthetic_instance(config.m, config.M, config.instance_seed);

  HyperParams p = default_hyperparameters("dagp");
  for (const auto& a : config.algorithms) {
    if (a.name == "dagp") p = a.params;
  }
  CertifyResult result;
  result.kernel = verify_kernel_conditions(gossip, 1e-8, 16, config.graph_seed);
  result.matrices = build_certificates(gossip, p.at("mu"), p.at("rho"), p.at("alpha"),
                                       inst.max_smoothness(), config.certify.eta);
  const auto z_grid = default_z_grid(config.certify.z_radii, config.certify.z_phases);
  for (const double C : config.certify.c_values) {
    result.scans.push_back(
        assumption5_scan(result.matrices, C, config.certify.beta_values, z_grid, config.certify.epsilon));
  }
  return result;
}

std::string describe(const KernelReport& k) {
  std::ostringstream os;
  os << "dim ker(W) = " << k.kernel_dim_W << (k.kernel_W_is_ones ? " (span{1})" : " (NOT span{1})")
     << "; dim ker(Q) = " << k.kernel_dim_Q << ", dim ker(W^T) = " << k.kernel_dim_Wt
     << ", max principal angle = " << k.max_principal_angle
     << (k.kernels_match ? " (match)" : " (MISMATCH)") << "; min ||QWx||/||x|| = " << k.min_qwx_ratio
     << (k.qwx_spot_check ? " (ok)" : " (FAIL)");
  return os.str();
}

std::string describe(const Assumption5Report& r) {
  std::ostringstream os;
  const double C = r.points.empty() ? 0.0 : r.points.front().C;
  os << "C = " << C << ": " << r.points.size() << " grid points, " << r.singular_count
     << " singular; min |eig(T) - 1| = " << r.min_distance << " -> "
     << (r.passed ? "pass" : "fail") << " at epsilon " << r.epsilon;
  return os.str();
}

}  // namespace dagp
