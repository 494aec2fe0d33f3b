#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dagp/algorithms.hpp"
#include "dagp/metrics.hpp"

namespace dagp {

struct RunOptions {
  std::size_t iterations = 1000;
  std::size_t trace_every = 1;
  std::optional<double> f_star;
  int dykstra_iters = 500;
  double dykstra_tol = 1e-9;
  /// N values at which running averages are captured.
  std::vector<std::size_t> average_checkpoints;
  /// Per-node squared distance to this node is recorded for `tracked_nodes`.
  int reference_node = -1;
  std::vector<int> tracked_nodes;
  /// Called after reset and after every round.
  std::function<void(const Stepper&)> on_round;
};

/// Carries everything recorded before the non-finite round.
class RunAborted : public NonFiniteError {
 public:
  RunAborted(const NonFiniteError& cause, Trace partial)
      : NonFiniteError(cause), partial_(std::move(partial)) {}
  const Trace& partial() const { return partial_; }

 private:
  Trace partial_;
};

/**
 * Resets the stepper to x0 and applies `iterations` rounds, recording a
 * TraceRecord at n = 0 and every `trace_every` rounds after. The average
 * objective gap at record n uses the running averages over rounds 0..n-1
 * (the initial iterate itself at n = 0).
 */
Trace run(Stepper& stepper, const NodeMatrix& x0, const ProblemInstance& inst,
          const RunOptions& options);

}  // namespace dagp
