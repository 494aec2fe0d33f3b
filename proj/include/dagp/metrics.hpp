#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dagp/algorithms.hpp"
#include "dagp/mixing.hpp"
#include "dagp/problems.hpp"

namespace dagp {

/// x_bar = (1/M) sum_v x_v
Vector mean_iterate(const NodeMatrix& X);

struct FeasibilityGap {
  double gap = 0.0;
  bool converged = true;
};

/// ||x - P(x)|| with P the projection onto the intersection of `sets`.
FeasibilityGap feasibility_gap(const Vector& x, const std::vector<SetPtr>& sets,
                               int dykstra_iters = 500, double tol = 1e-9);

/// max_v ||x_v - x_bar||^2
double consensus_error(const NodeMatrix& X);
/// ||sum_v g_v||
double grad_sum_norm(const NodeMatrix& G);

struct TraceRecord {
  std::size_t n = 0;
  double objective = 0.0;        // sum_v f_v(x_bar)
  double feasibility_gap = 0.0;
  double consensus_error = 0.0;
  double grad_sum_norm = 0.0;
  double optimality_gap = std::numeric_limits<double>::quiet_NaN();     // needs f*
  double avg_objective_gap = std::numeric_limits<double>::quiet_NaN();  // needs f*
  /// ||x_v - x_ref||^2 for the tracked nodes, when configured.
  std::vector<double> node_errors;
};

struct TraceMetadata {
  std::string algorithm;
  HyperParams hyperparameters;
  std::uint64_t instance_seed = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t init_seed = 0;
  std::optional<KernelReport> kernel;
  std::optional<double> f_star;
  std::optional<std::size_t> aborted_at;
  bool dykstra_converged = true;
  int reference_node = -1;
  std::vector<int> tracked_nodes;
};

/// Running averages x_bar^v_N = (1/N) sum_{n<N} x_v(n) captured at N.
struct AverageSnapshot {
  std::size_t N = 0;
  NodeMatrix averages;
};

struct Trace {
  std::vector<TraceRecord> records;
  TraceMetadata meta;
  std::vector<AverageSnapshot> snapshots;
};

inline constexpr const char* kTraceCsvHeader =
    "n,objective,feasibility_gap,consensus_error,grad_sum_norm,optimality_gap,avg_objective_gap";

void write_trace_csv(std::ostream& os, const Trace& trace);
/// "n,node_<v>,..." rows of squared distance to the reference node.
void write_node_consensus_csv(std::ostream& os, const Trace& trace);

enum class DecayModel { InvSqrtN, InvN, LinearLog };

DecayModel parse_decay_model(const std::string& name);
std::string to_string(DecayModel model);

struct FitReport {
  DecayModel model = DecayModel::InvN;
  /// C in C n^-p, or exp(intercept) for LinearLog.
  double coefficient = 0.0;
  /// Slope of log(value) in n for LinearLog, -p otherwise.
  double slope = 0.0;
  double r_squared = 0.0;
  /// sup_n value(n) n^p (power models) or sup_n value(n) / exp(intercept + slope n).
  double boundedness = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit on the tail half of (n, value) with n >= 1 and finite,
/// positive values. Throws std::invalid_argument with fewer than 10 records.
FitReport rate_fit(const std::vector<double>& n, const std::vector<double>& value, DecayModel model);
FitReport rate_fit(const Trace& trace, const std::string& field, DecayModel model);

/// Field accessor by CSV column name.
double trace_field(const TraceRecord& r, const std::string& field);

}  // namespace dagp
