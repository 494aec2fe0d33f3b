#pragma once

#include "dagp/algorithms.hpp"

namespace dagp {

/// Diminishing step c / sqrt(n + 1).
inline double diminishing_step(double c, std::size_t n) {
  return c / std::sqrt(static_cast<double>(n) + 1.0);
}

// Distributed directed projected subgradient with surplus consensus.
//   X+ = P_S(A X + eps S - a_n grad F(X))
//   S+ = X - A X + B S - eps S
// A = I - W (row stochastic), B = I - Q (column stochastic).
struct DdpsParams {
  double c = 0.5;
  double eps = 0.05;
};
struct DdpsState {
  NodeMatrix X;
  NodeMatrix S;     // surplus
  NodeMatrix grad;  // grad F at X
  std::size_t n = 0;
};
DdpsState ddps_init(const ProblemInstance& inst, const NodeMatrix& x0, int workers = 1);
DdpsState ddps_step(const DdpsState& state, const ProblemInstance& inst, const GossipPair& gossip,
                    const DdpsParams& params, int workers = 1);

// ADD-OPT with push-sum correction over the column stochastic B = I - Q.
//   x+ = B x - step w,  y+ = B y,  z+ = x+ / y+,  w+ = B w + grad F(z+) - grad F(z)
struct AddOptParams {
  double step = 0.01;
};
struct AddOptState {
  NodeMatrix X;     // un-normalized iterates
  Vector y;         // push-sum weights
  NodeMatrix Z;     // normalized estimates (reported)
  NodeMatrix W;     // gradient tracker
  NodeMatrix grad;  // grad F at Z
  std::size_t n = 0;
};
AddOptState addopt_init(const ProblemInstance& inst, const NodeMatrix& x0, int workers = 1);
AddOptState addopt_step(const AddOptState& state, const ProblemInstance& inst,
                        const GossipPair& gossip, const AddOptParams& params, int workers = 1);

// Push-Pull with row stochastic A = I - W and column stochastic B = I - Q.
//   x+ = A (x - step y),  y+ = B y + grad F(x+) - grad F(x)
struct PushPullParams {
  double step = 0.01;
};
struct PushPullState {
  NodeMatrix X;
  NodeMatrix Y;
  NodeMatrix grad;
  std::size_t n = 0;
};
PushPullState pushpull_init(const ProblemInstance& inst, const NodeMatrix& x0, int workers = 1);
PushPullState pushpull_step(const PushPullState& state, const ProblemInstance& inst,
                            const GossipPair& gossip, const PushPullParams& params,
                            int workers = 1);

// Projected decentralized gradient descent over the row stochastic A = I - W.
//   X+ = P_S(A X - a_n grad F(X))
struct ProjDgdParams {
  double c = 0.5;
};
struct ProjDgdState {
  NodeMatrix X;
  NodeMatrix grad;
  std::size_t n = 0;
};
ProjDgdState proj_dgd_init(const ProblemInstance& inst, const NodeMatrix& x0, int workers = 1);
ProjDgdState proj_dgd_step(const ProjDgdState& state, const ProblemInstance& inst,
                           const GossipPair& gossip, const ProjDgdParams& params,
                           int workers = 1);

}  // namespace dagp
