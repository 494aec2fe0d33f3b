#include "dagp/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace dagp {

CertificateMatrices build_certificates(const GossipPair& gossip, double mu, double rho,
                                       double alpha, double L, double eta) {
  for (const double p : {mu, rho, alpha, L, eta}) {
    if (!(p > 0.0)) throw std::invalid_argument("build_certificates: parameters must be positive");
  }
  const Eigen::Index M = gossip.W.rows();
  if (gossip.Q.rows() != M || gossip.W.cols() != M || gossip.Q.cols() != M) {
    throw std::invalid_argument("build_certificates: W and Q must be square and equal in size");
  }
  const Matrix I = Matrix::Identity(M, M);
  const Matrix I_minus_W = I - gossip.W;
  const double k = rho / mu;

  CertificateMatrices c;
  c.mu = mu;
  c.rho = rho;
  c.alpha = alpha;
  c.L = L;
  c.eta = eta;
  c.M = static_cast<int>(M);

  c.R = Matrix::Zero(4 * M, 4 * M);
  c.R.block(M, 0, M, M) = I;
  c.R.block(2 * M, 0, M, M) = -k * I;
  c.R.block(2 * M, M, M, M) = k * I_minus_W;
  c.R.block(2 * M, 2 * M, M, M) = I;
  c.R.block(2 * M, 3 * M, M, M) = alpha * I;
  c.R.block(3 * M, 0, M, M) = k * I;
  c.R.block(3 * M, M, M, M) = -k * I_minus_W;
  c.R.block(3 * M, 3 * M, M, M) = (1.0 - alpha) * I - gossip.Q;

  c.P = Matrix::Zero(4 * M, M);
  c.P.topRows(M) = I;

  const double half_Lmu = 0.5 * L * mu;
  const Matrix centering = I - Matrix::Constant(M, M, 1.0 / static_cast<double>(M));
  c.S = Matrix::Zero(4 * M, 4 * M);
  c.S.block(0, 0, M, M) = (1.0 - half_Lmu) * I - static_cast<double>(M) * eta * centering;
  c.S.block(0, M, M, M) = -0.5 * I_minus_W + half_Lmu * I;
  c.S.block(0, 2 * M, M, M) = -0.5 * mu * I;
  c.S.block(M, 0, M, M) = -0.5 * I_minus_W.transpose() + half_Lmu * I;
  c.S.block(M, M, M, M) = -half_Lmu * I;
  c.S.block(2 * M, 0, M, M) = -0.5 * mu * I;
  return c;
}

ComplexMatrix build_F(const CertificateMatrices& cert, Complex z, double beta) {
  if (z == Complex(0.0, 0.0)) throw std::invalid_argument("build_F: z must be nonzero");
  const Eigen::Index M = cert.M;
  const Eigen::Index n4 = 4 * M;
  const ComplexMatrix I4 = ComplexMatrix::Identity(n4, n4);
  const ComplexMatrix R = cert.R.cast<Complex>();
  const ComplexMatrix P = cert.P.cast<Complex>();

  ComplexMatrix F = ComplexMatrix::Zero(9 * M, 9 * M);
  F.block(0, 0, n4, n4) = cert.S.cast<Complex>();
  F.block(0, n4, n4, n4) = (1.0 / z) * I4 - R.transpose();
  F.block(n4, 0, n4, n4) = z * I4 - R;
  F.block(n4, 2 * n4, n4, M) = -P;
  F.block(2 * n4, n4, M, n4) = -P.transpose();
  F.block(2 * n4, 2 * n4, M, M) = -beta * ComplexMatrix::Identity(M, M);
  return F;
}

double inverse_condition(const ComplexMatrix& A) {
  Eigen::BDCSVD<ComplexMatrix> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

double eigen_distance_to_one(const ComplexMatrix& T) {
  if (T.rows() == 0) return 1.0;
  Eigen::ComplexEigenSolver<ComplexMatrix> eig(T, false);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    best = std::min(best, std::abs(eig.eigenvalues()(k) - Complex(1.0, 0.0)));
  }
  return best;
}

std::vector<Complex> default_z_grid(const std::vector<double>& radii, int phases) {
  std::vector<Complex> grid;
  for (const double r : radii) {
    for (int k = 0; k < phases; ++k) {
      grid.push_back(std::polar(r, 2.0 * std::numbers::pi * k / phases));
    }
  }
  return grid;
}

Assumption5Report assumption5_scan(const CertificateMatrices& cert, double C,
                                   const std::vector<double>& beta_grid,
                                   const std::vector<Complex>& z_grid, double epsilon) {
  if (beta_grid.empty() || z_grid.empty()) {
    throw std::invalid_argument("assumption5_scan: empty grid");
  }
  if (C < 0.0) throw std::invalid_argument("assumption5_scan: C must be nonnegative");
  const Eigen::Index M = cert.M;
  const Eigen::Index n4 = 4 * M;

  Assumption5Report report;
  report.epsilon = epsilon;
  report.min_distance = std::numeric_limits<double>::infinity();
  for (const double beta : beta_grid) {
    if (!(beta > 0.0)) throw std::invalid_argument("assumption5_scan: beta must be positive");
    ComplexMatrix rhs = ComplexMatrix::Zero(9 * M, n4);
    rhs.topRows(n4) = -(C + beta) * ComplexMatrix::Identity(n4, n4);
    rhs.middleRows(n4, n4) = ComplexMatrix::Identity(n4, n4);

    for (const Complex z : z_grid) {
      Assumption5Point pt;
      pt.z = z;
      pt.beta = beta;
      pt.C = C;
      const ComplexMatrix F = build_F(cert, z, beta);
      pt.inverse_condition = inverse_condition(F);
      pt.singular = pt.inverse_condition < 1e-10;
      if (pt.singular) {
        pt.min_eig_dist = std::numeric_limits<double>::quiet_NaN();
        ++report.singular_count;
      } else {
        const ComplexMatrix T = F.partialPivLu().solve(rhs).topRows(n4);
        pt.min_eig_dist = eigen_distance_to_one(T);
        report.min_distance = std::min(report.min_distance, pt.min_eig_dist);
      }
      report.points.push_back(pt);
    }
  }
  if (report.singular_count == static_cast<int>(report.points.size())) {
    throw std::runtime_error("assumption5_scan: F is singular at every grid point");
  }
  report.passed = report.min_distance >= epsilon;
  return report;
}

void write_assumption5_csv(std::ostream& os, const Assumption5Report& report) {
  os << "re_z,im_z,beta,C,min_eig_dist,singular_flag\n";
  char buf[160];
  for (const auto& p : report.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", p.z.real(), p.z.imag(),
                  p.beta, p.C, p.min_eig_dist, p.singular ? 1 : 0);
    os << buf;
  }
}

}  // namespace dagp
