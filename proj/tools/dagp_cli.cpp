// Command-line harness: run experiments, certify gossip matrices, solve the
// centralized reference.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "dagp/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeAbort = 2;
constexpr int kIoError = 3;

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const dagp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const dagp::ExperimentAborted& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kRuntimeAbort;
  } catch (const dagp::NonFiniteError& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kRuntimeAbort;
  } catch (const dagp::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeAbort;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized constrained optimization over directed graphs"};
  app.require_subcommand(1);

  std::string run_config;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iters;
  auto* run_cmd = app.add_subcommand("run", "Run every configured algorithm and write traces");
  run_cmd->add_option("config", run_config, "Experiment config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run_cmd->add_option("--seed", seed, "Instance seed (overrides instance_seed)");
  run_cmd->add_option("--iters", iters, "Iteration count (overrides iterations)");

  std::string certify_config;
  auto* certify_cmd = app.add_subcommand("certify", "Kernel checks and eigenvalue scan");
  certify_cmd->add_option("config", certify_config, "Experiment config file")->required();

  std::string ref_config;
  auto* ref_cmd = app.add_subcommand("solve-ref", "Centralized reference solution only");
  ref_cmd->add_option("config", ref_config, "Experiment config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  if (*run_cmd) {
    return guarded([&] {
      auto config = dagp::load_config(run_config);
      if (out_dir) config.output_dir = *out_dir;
      if (seed) config.instance_seed = *seed;
      if (iters) config.iterations = *iters;
      dagp::validate_config(config);
      const auto result = dagp::run_experiment(config);
      std::cout << "kernel: " << dagp::describe(result.setup.kernel) << '\n';
      std::printf("reference: f* = %.12g, kkt residual = %.3g, %d iterations\n",
                  result.setup.reference.f_star, result.setup.reference.kkt_residual,
                  result.setup.reference.iterations_used);
      for (const auto& [name, trace] : result.traces) {
        const auto& last = trace.records.back();
        std::printf("%-9s n=%zu objective=%.10g feasibility_gap=%.3g consensus=%.3g gap=%.3g\n",
                    name.c_str(), last.n, last.objective, last.feasibility_gap, last.consensus_error,
                    last.optimality_gap);
      }
      std::cout << "outputs written to " << config.output_dir << '\n';
      return kOk;
    });
  }
  if (*certify_cmd) {
    return guarded([&] {
      const auto config = dagp::load_config(certify_config);
      const auto result = dagp::certify_experiment(config);
      std::cout << "kernel: " << dagp::describe(result.kernel) << '\n';
      std::filesystem::create_directories(config.output_dir);
      const auto csv = std::filesystem::path(config.output_dir) / "assumption5.csv";
      std::ofstream out(csv);
      if (!out) throw dagp::IoError("cannot write '" + csv.string() + "'");
      bool header = true;
      for (const auto& scan : result.scans) {
        std::cout << "assumption5: " << dagp::describe(scan) << '\n';
        std::ostringstream os;
        dagp::write_assumption5_csv(os, scan);
        std::string text = os.str();
        if (!header) text = text.substr(text.find('\n') + 1);
        out << text;
        header = false;
      }
      std::cout << "scan written to " << csv.string() << '\n';
      return kOk;
    });
  }
  return guarded([&] {
    const auto config = dagp::load_config(ref_config);
    dagp::ExperimentConfig copy = config;
    const auto setup = dagp::prepare_experiment(copy);
    const auto& ref = setup.reference;
    std::printf("f* = %.17g\nkkt residual = %.3g\niterations = %d\nconverged = %s\nx* =",
                ref.f_star, ref.kkt_residual, ref.iterations_used, ref.converged ? "yes" : "no");
    for (Eigen::Index k = 0; k < ref.x_star.size(); ++k) std::printf(" %.17g", ref.x_star(k));
    std::printf("\n");
    return kOk;
  });
}
