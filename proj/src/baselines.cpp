#include "dagp/baselines.hpp"

namespace dagp {

DdpsState ddps_init(const ProblemInstance& inst, const NodeMatrix& x0, int workers) {
  return {x0, NodeMatrix::Zero(x0.rows(), x0.cols()), local_gradients(inst, x0, workers), 0};
}

DdpsState ddps_step(const DdpsState& state, const ProblemInstance& inst, const GossipPair& gossip,
                    const DdpsParams& params, int workers) {
  const double a = diminishing_step(params.c, state.n);
  const NodeMatrix ax = state.X - gossip.W * state.X;
  DdpsState next;
  next.X = local_projections(inst, ax + params.eps * state.S - a * state.grad, workers);
  next.S = state.X - ax + (state.S - gossip.Q * state.S) - params.eps * state.S;
  next.grad = local_gradients(inst, next.X, workers);
  next.n = state.n + 1;
  require_finite("ddps", next.n, {&next.X, &next.S});
  return next;
}

AddOptState addopt_init(const ProblemInstance& inst, const NodeMatrix& x0, int workers) {
  AddOptState s;
  s.X = x0;
  s.y = Vector::Ones(x0.rows());
  s.Z = x0;
  s.grad = local_gradients(inst, x0, workers);
  s.W = s.grad;
  return s;
}

AddOptState addopt_step(const AddOptState& state, const ProblemInstance& inst,
                        const GossipPair& gossip, const AddOptParams& params, int workers) {
  AddOptState next;
  next.X = state.X - gossip.Q * state.X - params.step * state.W;
  next.y = state.y - gossip.Q * state.y;
  next.Z = next.X.array().colwise() / next.y.array();
  next.grad = local_gradients(inst, next.Z, workers);
  next.W = state.W - gossip.Q * state.W + next.grad - state.grad;
  next.n = state.n + 1;
  require_finite("addopt", next.n, {&next.Z, &next.W});
  return next;
}

PushPullState pushpull_init(const ProblemInstance& inst, const NodeMatrix& x0, int workers) {
  PushPullState s;
  s.X = x0;
  s.grad = local_gradients(inst, x0, workers);
  s.Y = s.grad;
  return s;
}

PushPullState pushpull_step(const PushPullState& state, const ProblemInstance& inst,
                            const GossipPair& gossip, const PushPullParams& params, int workers) {
  PushPullState next;
  const NodeMatrix moved = state.X - params.step * state.Y;
  next.X = moved - gossip.W * moved;
  next.grad = local_gradients(inst, next.X, workers);
  next.Y = state.Y - gossip.Q * state.Y + next.grad - state.grad;
  next.n = state.n + 1;
  require_finite("pushpull", next.n, {&next.X, &next.Y});
  return next;
}

ProjDgdState proj_dgd_init(const ProblemInstance& inst, const NodeMatrix& x0, int workers) {
  return {x0, local_gradients(inst, x0, workers), 0};
}

ProjDgdState proj_dgd_step(const ProjDgdState& state, const ProblemInstance& inst,
                           const GossipPair& gossip, const ProjDgdParams& params, int workers) {
  const double a = diminishing_step(params.c, state.n);
  ProjDgdState next;
  next.X = local_projections(inst, state.X - gossip.W * state.X - a * state.grad, workers);
  next.grad = local_gradients(inst, next.X, workers);
  next.n = state.n + 1;
  require_finite("proj_dgd", next.n, {&next.X});
  return next;
}

}  // namespace dagp
