#include "dagp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "dagp/run.hpp"

namespace dagp {

Vector mean_iterate(const NodeMatrix& X) {
  if (X.rows() < 1) throw std::invalid_argument("mean_iterate: no nodes");
  return X.colwise().mean().transpose();
}

FeasibilityGap feasibility_gap(const Vector& x, const std::vector<SetPtr>& sets, int dykstra_iters,
                               double tol) {
  const DykstraResult proj = dykstra_project(sets, x, dykstra_iters, tol);
  return {(x - proj.point).norm(), proj.converged};
}

double consensus_error(const NodeMatrix& X) {
  const Vector mean = mean_iterate(X);
  double worst = 0.0;
  for (Eigen::Index v = 0; v < X.rows(); ++v) {
    worst = std::max(worst, (X.row(v).transpose() - mean).squaredNorm());
  }
  return worst;
}

double grad_sum_norm(const NodeMatrix& G) { return G.colwise().sum().norm(); }

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << kTraceCsvHeader << '\n';
  for (const auto& r : trace.records) {
    os << r.n << ',' << fmt17(r.objective) << ',' << fmt17(r.feasibility_gap) << ','
       << fmt17(r.consensus_error) << ',' << fmt17(r.grad_sum_norm) << ','
       << fmt17(r.optimality_gap) << ',' << fmt17(r.avg_objective_gap) << '\n';
  }
}

void write_node_consensus_csv(std::ostream& os, const Trace& trace) {
  os << 'n';
  for (const int v : trace.meta.tracked_nodes) os << ",node_" << v;
  os << '\n';
  for (const auto& r : trace.records) {
    os << r.n;
    for (const double e : r.node_errors) os << ',' << fmt17(e);
    os << '\n';
  }
}

double trace_field(const TraceRecord& r, const std::string& field) {
  if (field == "objective") return r.objective;
  if (field == "feasibility_gap") return r.feasibility_gap;
  if (field == "consensus_error") return r.consensus_error;
  if (field == "grad_sum_norm") return r.grad_sum_norm;
  if (field == "optimality_gap") return r.optimality_gap;
  if (field == "avg_objective_gap") return r.avg_objective_gap;
  throw std::invalid_argument("unknown trace field '" + field + "'");
}

DecayModel parse_decay_model(const std::string& name) {
  if (name == "inv_sqrt_n") return DecayModel::InvSqrtN;
  if (name == "inv_n") return DecayModel::InvN;
  if (name == "linear_log") return DecayModel::LinearLog;
  throw std::invalid_argument("unknown decay model '" + name + "'");
}

std::string to_string(DecayModel model) {
  switch (model) {
    case DecayModel::InvSqrtN: return "inv_sqrt_n";
    case DecayModel::InvN: return "inv_n";
    case DecayModel::LinearLog: return "linear_log";
  }
  return "?";
}

FitReport rate_fit(const std::vector<double>& n, const std::vector<double>& value,
                   DecayModel model) {
  if (n.size() != value.size()) throw std::invalid_argument("rate_fit: size mismatch");
  if (n.size() < 10) throw std::invalid_argument("rate_fit: insufficient data (need >= 10 records)");

  std::vector<double> xs, ys;
  for (std::size_t k = n.size() / 2; k < n.size(); ++k) {
    if (n[k] >= 1.0 && std::isfinite(value[k]) && value[k] > 0.0) {
      xs.push_back(n[k]);
      ys.push_back(value[k]);
    }
  }
  if (xs.size() < 2) throw std::invalid_argument("rate_fit: insufficient usable data in tail");

  FitReport rep;
  rep.model = model;
  rep.points = xs.size();
  const auto count = static_cast<double>(xs.size());

  if (model == DecayModel::LinearLog) {
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      mx += xs[k];
      my += std::log(ys[k]);
    }
    mx /= count;
    my /= count;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double dx = xs[k] - mx, dy = std::log(ys[k]) - my;
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
    rep.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const double intercept = my - rep.slope * mx;
    rep.coefficient = std::exp(intercept);
    double ss_res = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double r = std::log(ys[k]) - (intercept + rep.slope * xs[k]);
      ss_res += r * r;
    }
    rep.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      rep.boundedness =
          std::max(rep.boundedness, ys[k] / std::exp(intercept + rep.slope * xs[k]));
    }
    return rep;
  }

  const double p = model == DecayModel::InvSqrtN ? 0.5 : 1.0;
  rep.slope = -p;
  double num = 0.0, den = 0.0, mean_y = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double basis = std::pow(xs[k], -p);
    num += ys[k] * basis;
    den += basis * basis;
    mean_y += ys[k];
  }
  mean_y /= count;
  rep.coefficient = num / den;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - rep.coefficient * std::pow(xs[k], -p);
    ss_res += r * r;
    ss_tot += (ys[k] - mean_y) * (ys[k] - mean_y);
  }
  rep.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (n[k] >= 1.0 && std::isfinite(value[k])) {
      rep.boundedness = std::max(rep.boundedness, std::abs(value[k]) * std::pow(n[k], p));
    }
  }
  return rep;
}

FitReport rate_fit(const Trace& trace, const std::string& field, DecayModel model) {
  std::vector<double> n, v;
  for (const auto& r : trace.records) {
    n.push_back(static_cast<double>(r.n));
    v.push_back(trace_field(r, field));
  }
  return rate_fit(n, v, model);
}

// ---------------------------------------------------------------------------

namespace {

TraceRecord measure(const Stepper& stepper, const ProblemInstance& inst, const NodeMatrix& averages,
                    const RunOptions& opt, bool& dykstra_ok) {
  const NodeMatrix& X = stepper.iterates();
  const Vector mean = mean_iterate(X);
  TraceRecord r;
  r.n = stepper.round();
  r.objective = inst.objective(mean);
  const FeasibilityGap fg = feasibility_gap(mean, inst.sets, opt.dykstra_iters, opt.dykstra_tol);
  dykstra_ok = dykstra_ok && fg.converged;
  r.feasibility_gap = fg.gap;
  r.consensus_error = consensus_error(X);
  r.grad_sum_norm = grad_sum_norm(stepper.tracker());
  if (opt.f_star) {
    r.optimality_gap = r.objective - *opt.f_star;
    r.avg_objective_gap = std::abs(inst.local_objective_sum(averages) - *opt.f_star);
  }
  if (opt.reference_node >= 0) {
    for (const int v : opt.tracked_nodes) {
      r.node_errors.push_back((X.row(v) - X.row(opt.reference_node)).squaredNorm());
    }
  }
  return r;
}

}  // namespace

Trace run(Stepper& stepper, const NodeMatrix& x0, const ProblemInstance& inst,
          const RunOptions& options) {
  if (options.iterations < 1) throw std::invalid_argument("run: iterations must be >= 1");
  if (options.trace_every < 1) throw std::invalid_argument("run: trace_every must be >= 1");
  const int M = inst.node_count();
  if (options.reference_node >= M) throw std::invalid_argument("run: reference node out of range");
  for (const int v : options.tracked_nodes) {
    if (v < 0 || v >= M) throw std::invalid_argument("run: tracked node out of range");
  }

  Trace trace;
  trace.meta.algorithm = stepper.name();
  trace.meta.hyperparameters = stepper.hyperparameters();
  trace.meta.f_star = options.f_star;
  trace.meta.reference_node = options.reference_node;
  trace.meta.tracked_nodes = options.tracked_nodes;

  stepper.reset(x0);
  if (options.on_round) options.on_round(stepper);
  NodeMatrix running_sum = NodeMatrix::Zero(x0.rows(), x0.cols());
  bool dykstra_ok = true;
  trace.records.push_back(measure(stepper, inst, stepper.iterates(), options, dykstra_ok));

  try {
    for (std::size_t k = 0; k < options.iterations; ++k) {
      running_sum += stepper.iterates();
      stepper.step();
      if (options.on_round) options.on_round(stepper);
      const std::size_t N = stepper.round();
      if (std::find(options.average_checkpoints.begin(), options.average_checkpoints.end(), N) !=
          options.average_checkpoints.end()) {
        trace.snapshots.push_back({N, running_sum / static_cast<double>(N)});
      }
      if (N % options.trace_every == 0) {
        trace.records.push_back(measure(stepper, inst, running_sum / static_cast<double>(N),
                                        options, dykstra_ok));
      }
    }
  } catch (const NonFiniteError& e) {
    trace.meta.aborted_at = e.round();
    trace.meta.dykstra_converged = dykstra_ok;
    throw RunAborted(e, std::move(trace));
  }
  trace.meta.dykstra_converged = dykstra_ok;
  return trace;
}

}  // namespace dagp
