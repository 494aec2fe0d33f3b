#include "dagp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/QR>

namespace dagp {

NnlsResult nnls(const Matrix& A, const Vector& b, int max_iters) {
  const Eigen::Index n = A.cols();
  if (max_iters <= 0) max_iters = static_cast<int>(3 * n + 10);
  NnlsResult res{Vector::Zero(n), b.norm(), 0};
  if (n == 0) return res;

  Vector& x = res.solution;
  std::vector<bool> passive(n, false);
  const double eps = 1e-12 * std::max(1.0, A.norm() * b.norm());

  auto solve_passive = [&](Vector& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[j]) idx.push_back(j);
    }
    Matrix sub(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Vector zs = sub.colPivHouseholderQr().solve(b);
    z = Vector::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zs(static_cast<Eigen::Index>(k));
  };

  for (int outer = 0; outer < max_iters; ++outer) {
    const Vector w = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    double best_w = eps;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = true;
    ++res.iterations;

    Vector z;
    solve_passive(z);
    for (int inner = 0; inner < max_iters; ++inner) {
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) feasible = false;
      }
      if (feasible) break;
      double step = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) step = std::min(step, x(j) / (x(j) - z(j)));
      }
      x += step * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= 1e-15) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
      solve_passive(z);
    }
    x = z;
  }
  res.residual_norm = (A * x - b).norm();
  return res;
}

double kkt_residual(const ProblemInstance& inst, const Vector& x, double activity,
                    double feasibility_tol) {
  std::vector<Vector> generators;
  for (int v = 0; v < inst.node_count(); ++v) {
    if (inst.sets[v]->distance(x) > feasibility_tol) {
      throw std::invalid_argument("kkt_residual: point is infeasible for node " + std::to_string(v));
    }
    const Matrix g = inst.sets[v]->normal_generators(x, activity);
    for (Eigen::Index k = 0; k < g.cols(); ++k) generators.push_back(g.col(k));
  }
  const Vector grad = inst.gradient(x);
  if (generators.empty()) return grad.norm();
  Matrix N(x.size(), static_cast<Eigen::Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) N.col(static_cast<Eigen::Index>(k)) = generators[k];
  return nnls(N, -grad).residual_norm;
}

ReferenceSolution centralized_solve(const ProblemInstance& inst, const ReferenceOptions& options) {
  inst.validate();
  const double step = options.step > 0.0 ? options.step : 1.0 / inst.total_smoothness();
  const bool constrained = !inst.unconstrained();
  auto project = [&](const Vector& y) -> Vector {
    if (!constrained) return y;
    return dykstra_project(inst.sets, y, options.dykstra_iters, options.dykstra_tol).point;
  };

  ReferenceSolution sol;
  Vector x = project(Vector::Zero(inst.dimension));
  if (options.record_history) sol.history.push_back(inst.objective(x));
  for (int k = 1; k <= options.max_iters; ++k) {
    const Vector next = project(x - step * inst.gradient(x));
    const double moved = (next - x).norm();
    x = next;
    sol.iterations_used = k;
    if (options.record_history) sol.history.push_back(inst.objective(x));
    if (!std::isfinite(moved)) break;
    if (moved <= options.tol) {
      sol.converged = true;
      break;
    }
  }
  sol.x_star = x;
  sol.f_star = inst.objective(x);
  try {
    sol.kkt_residual = kkt_residual(inst, x);
  } catch (const std::invalid_argument&) {
    sol.kkt_residual = std::numeric_limits<double>::infinity();
  }
  return sol;
}

}  // namespace dagp
