#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "dagp/mixing.hpp"

namespace dagp {

using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/**
 * Matrices of the convergence analysis, over the stacked 4M-row block order
 * [X(n+1) - x*; X(n) - x*; G(n) - g*; H(n) - G(n)].
 *
 * R and P drive the linear recursion Psi(n+1) = R Psi(n) + P X(n+2); S is the
 * quadratic form whose partial sums must stay bounded below.
 */
struct CertificateMatrices {
  Matrix R;  // 4M x 4M
  Matrix P;  // 4M x M
  Matrix S;  // 4M x 4M, symmetric
  double mu = 0.0;
  double rho = 0.0;
  double alpha = 0.0;
  double L = 0.0;
  double eta = 0.0;
  int M = 0;
};

CertificateMatrices build_certificates(const GossipPair& gossip, double mu, double rho,
                                       double alpha, double L, double eta);

/// F(z, beta) = [[S, I/z - R^T, 0], [zI - R, 0, -P], [0, -P^T, -beta I]], 9M x 9M.
ComplexMatrix build_F(const CertificateMatrices& cert, Complex z, double beta);

/// sigma_min / sigma_max of a square complex matrix.
double inverse_condition(const ComplexMatrix& A);

/// min_k |lambda_k(T) - 1|; 1 for an empty matrix.
double eigen_distance_to_one(const ComplexMatrix& T);

struct Assumption5Point {
  Complex z;
  double beta = 0.0;
  double C = 0.0;
  double min_eig_dist = 0.0;
  double inverse_condition = 0.0;
  bool singular = false;
};

struct Assumption5Report {
  std::vector<Assumption5Point> points;
  double epsilon = 0.0;
  double min_distance = 0.0;  // over non-singular points
  int singular_count = 0;
  bool passed = false;
};

/// |z| in radii times `phases` equally spaced angles.
std::vector<Complex> default_z_grid(const std::vector<double>& radii = {1e-2, 1e-3, 1e-4},
                                    int phases = 8);

/**
 * For each (z, beta) forms T = [I 0 0] F^-1 [-(C + beta) I; I; 0] and records
 * the distance of its spectrum from 1. Points where sigma_min(F) < 1e-10
 * sigma_max(F) are flagged and skipped. Throws std::runtime_error when every
 * point is singular. A numerical scan near z = 0, not a proof.
 */
Assumption5Report assumption5_scan(const CertificateMatrices& cert, double C,
                                   const std::vector<double>& beta_grid,
                                   const std::vector<Complex>& z_grid, double epsilon);

/// Header: re_z,im_z,beta,C,min_eig_dist,singular_flag
void write_assumption5_csv(std::ostream& os, const Assumption5Report& report);

}  // namespace dagp
