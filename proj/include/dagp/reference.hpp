#pragma once

#include <vector>

#include "dagp/problems.hpp"

namespace dagp {

struct ReferenceSolution {
  Vector x_star;
  double f_star = 0.0;
  double kkt_residual = 0.0;
  int iterations_used = 0;
  bool converged = false;
  /// Objective after each iterate, starting with the initial point; filled
  /// only when ReferenceOptions::record_history is set.
  std::vector<double> history;
};

struct ReferenceOptions {
  /// Step size; <= 0 selects 1 / sum_v L_v.
  double step = 0.0;
  int max_iters = 200000;
  /// Stop once ||x_{k+1} - x_k|| <= tol.
  double tol = 1e-12;
  int dykstra_iters = 5000;
  double dykstra_tol = 1e-13;
  bool record_history = false;
};

/// Projected gradient descent on sum_v f_v over the intersection of the S_v.
ReferenceSolution centralized_solve(const ProblemInstance& inst, const ReferenceOptions& options = {});

/// min ||g + sum_k lambda_k n_k|| over lambda >= 0 where n_k are the normal
/// cone generators active at x (threshold `activity`). Throws
/// std::invalid_argument if x is farther than `feasibility_tol` from some S_v.
double kkt_residual(const ProblemInstance& inst, const Vector& x, double activity = 1e-7,
                    double feasibility_tol = 1e-6);

struct NnlsResult {
  Vector solution;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
NnlsResult nnls(const Matrix& A, const Vector& b, int max_iters = 0);

}  // namespace dagp
