#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "dagp/graph.hpp"
#include "dagp/types.hpp"

namespace dagp {

/**
 * Gossip matrices for a directed graph.
 *
 * W has zero row sums and drives consensus; Q has zero column sums and
 * preserves the network sum of whatever it mixes. Both are scaled Laplacians,
 * W = L_in / (2 d_in_max) and Q = L_out / (2 d_out_max), so every entry lies
 * in [-1/2, 1/2] and I - W, I - Q are nonnegative stochastic matrices.
 */
struct GossipPair {
  Matrix W;
  Matrix Q;
  DirectedGraph graph;

  int node_count() const { return static_cast<int>(W.rows()); }
};

GossipPair build_gossip_pair(const DirectedGraph& g);

/// I - W. Rows sum to one.
Matrix row_stochastic(const Matrix& W);
/// I - Q. Columns sum to one.
Matrix column_stochastic(const Matrix& Q);

struct KernelReport {
  int kernel_dim_W = 0;
  bool kernel_W_is_ones = false;        // dim ker(W) == 1 and 1 spans it
  int kernel_dim_Q = 0;
  int kernel_dim_Wt = 0;
  double max_principal_angle = 0.0;     // between ker(Q) and ker(W^T), radians
  bool kernels_match = false;           // ker(Q) == ker(W^T) up to tol
  double min_qwx_ratio = 0.0;           // min ||QWx|| / ||x|| over x orthogonal to 1
  bool qwx_spot_check = false;        // all sampled ||QWx|| > 0
  double tol = 1e-8;

  bool passed() const { return kernel_W_is_ones && kernels_match && qwx_spot_check; }
};

/// Numerical right null-space basis (orthonormal columns) via SVD; singular
/// values below rel_tol * max(1, s_max) count as zero.
Matrix null_space(const Matrix& A, double rel_tol = 1e-10);

/// Largest principal angle between the column spaces of two orthonormal bases.
/// Returns pi/2 when the dimensions differ.
double max_principal_angle(const Matrix& U, const Matrix& V);

/// Never throws on a failed condition; the flags carry the outcome.
KernelReport verify_kernel_conditions(const GossipPair& pair, double tol = 1e-8, int samples = 16,
                                      std::uint64_t seed = 0);

/// Row-major CSV with "%.17g" entries.
void write_matrix_csv(std::ostream& os, const Matrix& A);

}  // namespace dagp
