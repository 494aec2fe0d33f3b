#include "dagp/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dagp/baselines.hpp"

namespace dagp {

NonFiniteError::NonFiniteError(std::string algorithm, std::size_t round)
    : std::runtime_error(algorithm + ": non-finite iterate at round " + std::to_string(round)),
      algorithm_(std::move(algorithm)),
      round_(round) {}

void DagpParams::validate() const {
  for (const double p : {mu, rho, alpha}) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("DagpParams: mu, rho and alpha must be positive and finite");
    }
  }
}

void require_finite(const std::string& algorithm, std::size_t round,
                    std::initializer_list<const NodeMatrix*> mats) {
  for (const auto* m : mats) {
    if (!m->allFinite()) throw NonFiniteError(algorithm, round);
  }
}

NodeMatrix random_initial_iterates(int node_count, int dimension, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  NodeMatrix X(node_count, dimension);
  for (int v = 0; v < node_count; ++v) {
    for (int k = 0; k < dimension; ++k) X(v, k) = normal(rng);
  }
  return X;
}

DagpState dagp_init(const ProblemInstance& inst, const GossipPair& gossip, const DagpParams& params,
                    std::uint64_t x_init_seed) {
  return dagp_init(inst, gossip, params,
                   random_initial_iterates(inst.node_count(), inst.dimension, x_init_seed));
}

DagpState dagp_init(const ProblemInstance& inst, const GossipPair& gossip, const DagpParams& params,
                    const NodeMatrix& x0) {
  params.validate();
  const int M = inst.node_count();
  if (gossip.node_count() != M) {
    throw std::invalid_argument("dagp_init: gossip matrices do not match the node count");
  }
  if (x0.rows() != M || x0.cols() != inst.dimension) {
    throw std::invalid_argument("dagp_init: initial iterate shape mismatch");
  }
  const NodeMatrix zero = NodeMatrix::Zero(M, inst.dimension);
  return {x0, zero, zero, zero, 0};
}

DagpState dagp_step(const DagpState& state, const ProblemInstance& inst, const GossipPair& gossip,
                    const DagpParams& params, int workers) {
  const NodeMatrix grad = local_gradients(inst, state.X, workers);
  DagpState next;
  next.Z = state.X - gossip.W * state.X - params.mu * (grad - state.G);
  next.X = local_projections(inst, next.Z, workers);
  next.G = state.G + params.rho * (grad - state.G + (next.Z - next.X) / params.mu) +
           params.alpha * (state.H - state.G);
  next.H = state.H - gossip.Q * (state.H - state.G);
  next.n = state.n + 1;
  require_finite("dagp", next.n, {&next.X, &next.G, &next.H});
  return next;
}

BroadcastMessage broadcast_message(const DagpState& state, int v) {
  if (v < 0 || v >= state.X.rows()) throw std::out_of_range("broadcast_message: bad node");
  return {state.X.row(v).transpose(), (state.H.row(v) - state.G.row(v)).transpose()};
}

DagpState dagp_step_message_passing(const DagpState& state, const ProblemInstance& inst,
                                    const GossipPair& gossip, const DagpParams& params) {
  const int M = inst.node_count();
  std::vector<BroadcastMessage> outbox;
  outbox.reserve(M);
  for (int u = 0; u < M; ++u) outbox.push_back(broadcast_message(state, u));

  DagpState next{NodeMatrix(state.X.rows(), state.X.cols()), NodeMatrix(state.G.rows(), state.G.cols()),
                 NodeMatrix(state.H.rows(), state.H.cols()), NodeMatrix(state.Z.rows(), state.Z.cols()),
                 state.n + 1};
  for (int v = 0; v < M; ++v) {
    const Vector x = state.X.row(v).transpose();
    const Vector g = state.G.row(v).transpose();
    const Vector h = state.H.row(v).transpose();
    const Vector grad = inst.functions[v]->gradient(x);

    Vector mixed_x = gossip.W(v, v) * x;
    Vector mixed_delta = gossip.Q(v, v) * (h - g);
    for (const int u : gossip.graph.in_neighbors(v)) {
      mixed_x += gossip.W(v, u) * outbox[u].x;
      mixed_delta += gossip.Q(v, u) * outbox[u].delta;
    }
    const Vector z = x - mixed_x - params.mu * (grad - g);
    const Vector x_next = inst.sets[v]->project(z);
    next.Z.row(v) = z.transpose();
    next.X.row(v) = x_next.transpose();
    next.G.row(v) =
        (g + params.rho * (grad - g + (z - x_next) / params.mu) + params.alpha * (h - g)).transpose();
    next.H.row(v) = (h - mixed_delta).transpose();
  }
  require_finite("dagp", next.n, {&next.X, &next.G, &next.H});
  return next;
}

double OptimalityReport::max_residual() const {
  return std::max({z_residual, projection_residual, tracker_residual, mixing_residual,
                   consensus_spread, tracker_sum, feasibility});
}

OptimalityReport check_stopping_point(const DagpState& state, const ProblemInstance& inst,
                                      const GossipPair& gossip, const DagpParams& params,
                                      double tol) {
  OptimalityReport r;
  r.tol = tol;
  const NodeMatrix grad = local_gradients(inst, state.X);
  const NodeMatrix& X = state.X;
  const NodeMatrix& Z = state.Z;
  r.z_residual = (Z - (X - gossip.W * X - params.mu * (grad - state.G))).norm();
  r.projection_residual = (X - local_projections(inst, Z)).norm();
  r.tracker_residual = (params.rho * (grad - state.G + (Z - X) / params.mu) +
                        params.alpha * (state.H - state.G))
                           .norm();
  r.mixing_residual = (gossip.Q * (state.H - state.G)).norm();

  const Vector mean = X.colwise().mean().transpose();
  for (Eigen::Index v = 0; v < X.rows(); ++v) {
    r.consensus_spread = std::max(r.consensus_spread, (X.row(v).transpose() - mean).norm());
  }
  r.tracker_sum = state.G.colwise().sum().norm();
  const DykstraResult proj = dykstra_project(inst.sets, mean, 2000, 1e-12);
  r.feasibility = (mean - proj.point).norm();
  r.passed = r.max_residual() <= tol;
  return r;
}

// ---------------------------------------------------------------------------

DagpStepper::DagpStepper(const ProblemInstance& inst, const GossipPair& gossip, DagpParams params,
                         int workers)
    : inst_(inst), gossip_(gossip), params_(params), workers_(workers) {
  params_.validate();
}

void DagpStepper::reset(const NodeMatrix& x0) { state_ = dagp_init(inst_, gossip_, params_, x0); }

void DagpStepper::step() { state_ = dagp_step(state_, inst_, gossip_, params_, workers_); }

HyperParams DagpStepper::hyperparameters() const {
  return {{"mu", params_.mu}, {"rho", params_.rho}, {"alpha", params_.alpha}};
}

namespace {

class DdpsStepper final : public Stepper {
 public:
  DdpsStepper(const ProblemInstance& inst, const GossipPair& gossip, DdpsParams p, int workers)
      : inst_(inst), gossip_(gossip), params_(p), workers_(workers) {}
  std::string name() const override { return "ddps"; }
  void reset(const NodeMatrix& x0) override { state_ = ddps_init(inst_, x0, workers_); }
  void step() override { state_ = ddps_step(state_, inst_, gossip_, params_, workers_); }
  std::size_t round() const override { return state_.n; }
  const NodeMatrix& iterates() const override { return state_.X; }
  const NodeMatrix& tracker() const override { return state_.grad; }
  HyperParams hyperparameters() const override { return {{"c", params_.c}, {"eps", params_.eps}}; }

 private:
  const ProblemInstance& inst_;
  const GossipPair& gossip_;
  DdpsParams params_;
  int workers_;
  DdpsState state_;
};

class AddOptStepper final : public Stepper {
 public:
  AddOptStepper(const ProblemInstance& inst, const GossipPair& gossip, AddOptParams p, int workers)
      : inst_(inst), gossip_(gossip), params_(p), workers_(workers) {}
  std::string name() const override { return "addopt"; }
  void reset(const NodeMatrix& x0) override { state_ = addopt_init(inst_, x0, workers_); }
  void step() override { state_ = addopt_step(state_, inst_, gossip_, params_, workers_); }
  std::size_t round() const override { return state_.n; }
  const NodeMatrix& iterates() const override { return state_.Z; }
  const NodeMatrix& tracker() const override { return state_.W; }
  const NodeMatrix* conserved() const override { return nullptr; }
  HyperParams hyperparameters() const override { return {{"step", params_.step}}; }

 private:
  const ProblemInstance& inst_;
  const GossipPair& gossip_;
  AddOptParams params_;
  int workers_;
  AddOptState state_;
};

class PushPullStepper final : public Stepper {
 public:
  PushPullStepper(const ProblemInstance& inst, const GossipPair& gossip, PushPullParams p,
                  int workers)
      : inst_(inst), gossip_(gossip), params_(p), workers_(workers) {}
  std::string name() const override { return "pushpull"; }
  void reset(const NodeMatrix& x0) override { state_ = pushpull_init(inst_, x0, workers_); }
  void step() override { state_ = pushpull_step(state_, inst_, gossip_, params_, workers_); }
  std::size_t round() const override { return state_.n; }
  const NodeMatrix& iterates() const override { return state_.X; }
  const NodeMatrix& tracker() const override { return state_.Y; }
  HyperParams hyperparameters() const override { return {{"step", params_.step}}; }

 private:
  const ProblemInstance& inst_;
  const GossipPair& gossip_;
  PushPullParams params_;
  int workers_;
  PushPullState state_;
};

class ProjDgdStepper final : public Stepper {
 public:
  ProjDgdStepper(const ProblemInstance& inst, const GossipPair& gossip, ProjDgdParams p,
                 int workers)
      : inst_(inst), gossip_(gossip), params_(p), workers_(workers) {}
  std::string name() const override { return "proj_dgd"; }
  void reset(const NodeMatrix& x0) override { state_ = proj_dgd_init(inst_, x0, workers_); }
  void step() override { state_ = proj_dgd_step(state_, inst_, gossip_, params_, workers_); }
  std::size_t round() const override { return state_.n; }
  const NodeMatrix& iterates() const override { return state_.X; }
  const NodeMatrix& tracker() const override { return state_.grad; }
  HyperParams hyperparameters() const override { return {{"c", params_.c}}; }

 private:
  const ProblemInstance& inst_;
  const GossipPair& gossip_;
  ProjDgdParams params_;
  int workers_;
  ProjDgdState state_;
};

HyperParams merged(const std::string& name, const HyperParams& given) {
  HyperParams out = default_hyperparameters(name);
  for (const auto& [key, value] : given) {
    if (!out.contains(key)) {
      throw std::invalid_argument("algorithm '" + name + "' has no parameter '" + key + "'");
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("algorithm '" + name + "': parameter '" + key +
                                  "' must be positive");
    }
    out[key] = value;
  }
  return out;
}

}  // namespace

bool is_known_algorithm(const std::string& name) {
  return name == "dagp" || name == "ddps" || name == "addopt" || name == "pushpull" ||
         name == "proj_dgd";
}

HyperParams default_hyperparameters(const std::string& name) {
  if (name == "dagp") return {{"mu", 0.1}, {"rho", 0.1}, {"alpha", 0.1}};
  if (name == "ddps") return {{"c", 0.5}, {"eps", 0.05}};
  if (name == "addopt") return {{"step", 0.01}};
  if (name == "pushpull") return {{"step", 0.01}};
  if (name == "proj_dgd") return {{"c", 0.5}};
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::unique_ptr<Stepper> make_stepper(const std::string& name, const HyperParams& params,
                                      const ProblemInstance& inst, const GossipPair& gossip,
                                      int workers) {
  const HyperParams p = merged(name, params);
  if (name == "dagp") {
    return std::make_unique<DagpStepper>(inst, gossip,
                                         DagpParams{p.at("mu"), p.at("rho"), p.at("alpha")}, workers);
  }
  if (name == "ddps") {
    return std::make_unique<DdpsStepper>(inst, gossip, DdpsParams{p.at("c"), p.at("eps")}, workers);
  }
  if (name == "addopt") {
    return std::make_unique<AddOptStepper>(inst, gossip, AddOptParams{p.at("step")}, workers);
  }
  if (name == "pushpull") {
    return std::make_unique<PushPullStepper>(inst, gossip, PushPullParams{p.at("step")}, workers);
  }
  return std::make_unique<ProjDgdStepper>(inst, gossip, ProjDgdParams{p.at("c")}, workers);
}

}  // namespace dagp
