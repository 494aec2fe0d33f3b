#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "dagp/mixing.hpp"
#include "dagp/problems.hpp"
#include "dagp/types.hpp"

namespace dagp {

/// Thrown when an iterate becomes NaN or infinite.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(std::string algorithm, std::size_t round);
  const std::string& algorithm() const { return algorithm_; }
  std::size_t round() const { return round_; }

 private:
  std::string algorithm_;
  std::size_t round_;
};

/// Step size mu, tracking gain rho and mixing gain alpha. All must be
/// positive and finite.
struct DagpParams {
  double mu = 0.1;
  double rho = 0.1;
  double alpha = 0.1;

  void validate() const;
};

/**
 * Per-node DAGP variables stacked by row.
 *
 * X holds the local iterates, G the gradient / feasible-direction tracker and
 * H its network-averaged partner. Z keeps the pre-projection points from the
 * last round. The sum of the rows of H never changes.
 */
struct DagpState {
  NodeMatrix X;
  NodeMatrix G;
  NodeMatrix H;
  NodeMatrix Z;
  std::size_t n = 0;
};

/// Standard-normal rows, deterministic in seed.
NodeMatrix random_initial_iterates(int node_count, int dimension, std::uint64_t seed);

DagpState dagp_init(const ProblemInstance& inst, const GossipPair& gossip, const DagpParams& params,
                    std::uint64_t x_init_seed);
DagpState dagp_init(const ProblemInstance& inst, const GossipPair& gossip, const DagpParams& params,
                    const NodeMatrix& x0);

/**
 * One synchronous DAGP round:
 *   Z  = X - W X - mu (grad F(X) - G)
 *   X+ = P_S(Z)                                     (row-wise)
 *   G+ = G + rho (grad F(X) - G + (Z - X+) / mu) + alpha (H - G)
 *   H+ = H - Q (H - G)
 * Gradient and projection work is split over `workers` threads by node; the
 * result is bitwise independent of the worker count.
 */
DagpState dagp_step(const DagpState& state, const ProblemInstance& inst, const GossipPair& gossip,
                    const DagpParams& params, int workers = 1);

/// What node v sends its out-neighbors each round.
struct BroadcastMessage {
  Vector x;
  Vector delta;  // h - g
};

BroadcastMessage broadcast_message(const DagpState& state, int v);

/// Same round as dagp_step, but each node only reads its own variables and the
/// messages of its in-neighbors.
DagpState dagp_step_message_passing(const DagpState& state, const ProblemInstance& inst,
                                    const GossipPair& gossip, const DagpParams& params);

/// Residuals of the stationarity system a DAGP fixed point must satisfy.
struct OptimalityReport {
  double z_residual = 0.0;         // ||Z - (X - WX - mu (grad F - G))||
  double projection_residual = 0.0;  // ||X - P_S(Z)||
  double tracker_residual = 0.0;   // ||rho (grad F - G + (Z - X) / mu) + alpha (H - G)||
  double mixing_residual = 0.0;    // ||Q (H - G)||
  double consensus_spread = 0.0;   // max_v ||x_v - mean||
  double tracker_sum = 0.0;        // ||1^T G||
  double feasibility = 0.0;        // dist(mean, intersection of S_v)
  double tol = 0.0;
  bool passed = false;

  double max_residual() const;
};

OptimalityReport check_stopping_point(const DagpState& state, const ProblemInstance& inst,
                                      const GossipPair& gossip, const DagpParams& params,
                                      double tol);

/// Throws NonFiniteError if any entry of the matrices is not finite.
void require_finite(const std::string& algorithm, std::size_t round,
                    std::initializer_list<const NodeMatrix*> mats);

using HyperParams = std::map<std::string, double>;

/// Common surface every decentralized method exposes to the runner.
class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual std::string name() const = 0;
  virtual void reset(const NodeMatrix& x0) = 0;
  /// One synchronous round; every neighbor read refers to the previous round.
  virtual void step() = 0;
  virtual std::size_t round() const = 0;
  /// Local iterates, one row per node.
  virtual const NodeMatrix& iterates() const = 0;
  /// The variable whose network sum should vanish at an optimum.
  virtual const NodeMatrix& tracker() const = 0;
  /// Rows whose sum the method conserves, if any.
  virtual const NodeMatrix* conserved() const { return nullptr; }
  virtual HyperParams hyperparameters() const = 0;
};

class DagpStepper final : public Stepper {
 public:
  DagpStepper(const ProblemInstance& inst, const GossipPair& gossip, DagpParams params,
              int workers = 1);
  std::string name() const override { return "dagp"; }
  void reset(const NodeMatrix& x0) override;
  void step() override;
  std::size_t round() const override { return state_.n; }
  const NodeMatrix& iterates() const override { return state_.X; }
  const NodeMatrix& tracker() const override { return state_.G; }
  const NodeMatrix* conserved() const override { return &state_.H; }
  HyperParams hyperparameters() const override;
  const DagpState& state() const { return state_; }

 private:
  const ProblemInstance& inst_;
  const GossipPair& gossip_;
  DagpParams params_;
  int workers_;
  DagpState state_;
};

/// Registry names: dagp, ddps, addopt, pushpull, proj_dgd. Unknown names or
/// parameters throw std::invalid_argument.
std::unique_ptr<Stepper> make_stepper(const std::string& name, const HyperParams& params,
                                      const ProblemInstance& inst, const GossipPair& gossip,
                                      int workers = 1);
bool is_known_algorithm(const std::string& name);
/// Parameter names and defaults for a registered algorithm.
HyperParams default_hyperparameters(const std::string& name);

}  // namespace dagp
