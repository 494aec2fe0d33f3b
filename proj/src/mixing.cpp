#include "dagp/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

namespace dagp {

GossipPair build_gossip_pair(const DirectedGraph& g) {
  const int n = g.node_count();
  if (n == 1) return {Matrix::Zero(1, 1), Matrix::Zero(1, 1), g};

  const Laplacians lap = laplacians(g);
  const double d_in = lap.in.diagonal().maxCoeff();
  const double d_out = lap.out.diagonal().maxCoeff();
  if (d_in <= 0.0 || d_out <= 0.0) {
    throw std::invalid_argument("build_gossip_pair: degenerate graph with no edges");
  }
  return {lap.in / (2.0 * d_in), lap.out / (2.0 * d_out), g};
}

Matrix row_stochastic(const Matrix& W) { return Matrix::Identity(W.rows(), W.cols()) - W; }

Matrix column_stochastic(const Matrix& Q) { return Matrix::Identity(Q.rows(), Q.cols()) - Q; }

Matrix null_space(const Matrix& A, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double cutoff = rel_tol * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > cutoff) ++rank;
  }
  return svd.matrixV().rightCols(A.cols() - rank);
}

double max_principal_angle(const Matrix& U, const Matrix& V) {
  if (U.cols() != V.cols()) return std::numbers::pi / 2.0;
  if (U.cols() == 0) return 0.0;
  // sin of the largest angle is the norm of V's component outside span(U);
  // asin keeps precision near zero where acos of the cosines does not.
  const Matrix residual = V - U * (U.transpose() * V);
  Eigen::JacobiSVD<Matrix> svd(residual);
  return std::asin(std::clamp(svd.singularValues().maxCoeff(), 0.0, 1.0));
}

KernelReport verify_kernel_conditions(const GossipPair& pair, double tol, int samples,
                                      std::uint64_t seed) {
  KernelReport report;
  report.tol = tol;
  const Eigen::Index n = pair.W.rows();

  const Matrix ker_w = null_space(pair.W);
  report.kernel_dim_W = static_cast<int>(ker_w.cols());
  if (ker_w.cols() == 1) {
    const Vector ones = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    report.kernel_W_is_ones = std::abs(std::abs(ker_w.col(0).dot(ones)) - 1.0) <= tol;
  }

  const Matrix ker_q = null_space(pair.Q);
  const Matrix ker_wt = null_space(pair.W.transpose());
  report.kernel_dim_Q = static_cast<int>(ker_q.cols());
  report.kernel_dim_Wt = static_cast<int>(ker_wt.cols());
  report.max_principal_angle = max_principal_angle(ker_q, ker_wt);
  report.kernels_match = report.max_principal_angle <= tol;

  // QWx for x with zero mean; this should never vanish when
  // ker(W) = span{1} and ker(Q) = ker(W^T).
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Matrix qw = pair.Q * pair.W;
  report.min_qwx_ratio = n > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  for (int k = 0; k < samples && n > 1; ++k) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = normal(rng);
    x.array() -= x.mean();
    report.min_qwx_ratio = std::min(report.min_qwx_ratio, (qw * x).norm() / x.norm());
  }
  report.qwx_spot_check = n == 1 || report.min_qwx_ratio > tol;
  return report;
}

void write_matrix_csv(std::ostream& os, const Matrix& A) {
  char buf[32];
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", A(i, j));
      if (j > 0) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace dagp
