#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dagp/types.hpp"

namespace dagp {

/// Convex, differentiable, L-smooth local objective.
class SmoothConvexFunction {
 public:
  virtual ~SmoothConvexFunction() = default;
  virtual int dimension() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  /// Lipschitz constant of the gradient.
  virtual double smoothness_bound() const = 0;
};

/// Closed convex set with an exact projection.
class ConvexSet {
 public:
  virtual ~ConvexSet() = default;
  virtual int dimension() const = 0;
  virtual Vector project(const Vector& x) const = 0;
  virtual double distance(const Vector& x) const { return (x - project(x)).norm(); }
  virtual bool contains(const Vector& x, double tol) const { return distance(x) <= tol; }
  /// Generators (columns) of the normal cone at a point of the set, using
  /// constraints active within `activity` of the boundary. Empty for
  /// interior points.
  virtual Matrix normal_generators(const Vector& x, double activity) const = 0;
};

using FunctionPtr = std::shared_ptr<const SmoothConvexFunction>;
using SetPtr = std::shared_ptr<const ConvexSet>;

/// log(cosh(a^T x - b)).
class LogCoshFunction final : public SmoothConvexFunction {
 public:
  LogCoshFunction(Vector a, double b);
  int dimension() const override { return static_cast<int>(a_.size()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double smoothness_bound() const override { return a_.squaredNorm(); }
  const Vector& a() const { return a_; }
  double b() const { return b_; }

 private:
  Vector a_;
  double b_;
};

/// Overflow-safe log(cosh(t)).
double log_cosh(double t);

/// (scale / 2) * ||x - center||^2.
class QuadraticFunction final : public SmoothConvexFunction {
 public:
  QuadraticFunction(Vector center, double scale = 1.0);
  int dimension() const override { return static_cast<int>(center_.size()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double smoothness_bound() const override { return scale_; }
  const Vector& center() const { return center_; }
  double scale() const { return scale_; }

 private:
  Vector center_;
  double scale_;
};

/**
 * Regularized logistic loss over a sample block:
 *   sum_i log(1 + exp(-y_i x_i^T w)) + (lambda / 2) ||w||^2
 * Rows of `features` are the x_i; labels are +1 or -1.
 */
class LogisticLoss final : public SmoothConvexFunction {
 public:
  LogisticLoss(Matrix features, Vector labels, double lambda);
  int dimension() const override { return static_cast<int>(features_.cols()); }
  double value(const Vector& w) const override;
  Vector gradient(const Vector& w) const override;
  /// lambda + lambda_max(X^T X) / 4.
  double smoothness_bound() const override { return smoothness_; }
  const Matrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }
  double lambda() const { return lambda_; }
  int sample_count() const { return static_cast<int>(features_.rows()); }

 private:
  Matrix features_;
  Vector labels_;
  double lambda_;
  double smoothness_;
};

/// log(1 + exp(t)) without overflow.
double softplus(double t);
/// 1 / (1 + exp(-t)) without overflow.
double sigmoid(double t);

/// {x : c^T x <= d}
class Halfspace final : public ConvexSet {
 public:
  Halfspace(Vector c, double d);
  int dimension() const override { return static_cast<int>(c_.size()); }
  Vector project(const Vector& x) const override;
  double distance(const Vector& x) const override;
  bool contains(const Vector& x, double tol) const override;
  Matrix normal_generators(const Vector& x, double activity) const override;
  const Vector& c() const { return c_; }
  double d() const { return d_; }

 private:
  Vector c_;
  double d_;
};

/// {x : lower <= x <= upper} componentwise.
class Box final : public ConvexSet {
 public:
  Box(Vector lower, Vector upper);
  int dimension() const override { return static_cast<int>(lower_.size()); }
  Vector project(const Vector& x) const override;
  Matrix normal_generators(const Vector& x, double activity) const override;
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

 private:
  Vector lower_;
  Vector upper_;
};

/// {x : ||x - center|| <= radius}
class Ball final : public ConvexSet {
 public:
  Ball(Vector center, double radius);
  int dimension() const override { return static_cast<int>(center_.size()); }
  Vector project(const Vector& x) const override;
  Matrix normal_generators(const Vector& x, double activity) const override;
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vector center_;
  double radius_;
};

/// R^m.
class WholeSpace final : public ConvexSet {
 public:
  explicit WholeSpace(int dimension) : dimension_(dimension) {}
  int dimension() const override { return dimension_; }
  Vector project(const Vector& x) const override { return x; }
  double distance(const Vector&) const override { return 0.0; }
  Matrix normal_generators(const Vector&, double) const override {
    return Matrix(dimension_, 0);
  }

 private:
  int dimension_;
};

/**
 * Node v owns functions[v] and sets[v]. The witness is a strictly feasible
 * point kept for tests; algorithms never read it.
 */
struct ProblemInstance {
  std::string kind;
  int dimension = 0;
  std::vector<FunctionPtr> functions;
  std::vector<SetPtr> sets;
  std::optional<Vector> witness;
  std::uint64_t seed = 0;
  double lambda = 0.0;  // logistic instances only

  int node_count() const { return static_cast<int>(functions.size()); }
  /// Throws std::invalid_argument on size or dimension mismatch.
  void validate() const;
  double objective(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  /// sum_v f_v(X.row(v))
  double local_objective_sum(const NodeMatrix& X) const;
  double max_smoothness() const;
  double total_smoothness() const;
  bool unconstrained() const;
};

/// Row v = grad f_v(X.row(v)). Node evaluations may run on `workers` threads;
/// each row is computed independently so the result does not depend on it.
NodeMatrix local_gradients(const ProblemInstance& inst, const NodeMatrix& X, int workers = 1);

/// Row v = P_{S_v}(Z.row(v)).
NodeMatrix local_projections(const ProblemInstance& inst, const NodeMatrix& Z, int workers = 1);

/// Log-cosh objectives with halfspace constraints around a strictly feasible
/// witness. All draws are standard normal.
ProblemInstance generate_synthetic_instance(int dimension, int node_count, std::uint64_t seed);

/// Two overlapping Gaussian classes split evenly over the nodes; lambda is one
/// over the total sample count and each node carries lambda / M of it so the
/// node losses sum to the centralized objective.
ProblemInstance generate_logistic_instance(int node_count, int dimension, int samples_per_node,
                                           std::uint64_t seed);

struct DykstraResult {
  Vector point;
  int iterations = 0;
  bool converged = false;
  double max_distance = 0.0;  // max_v dist(point, S_v)
};

/// Dykstra's alternating projections onto the intersection of `sets`.
DykstraResult dykstra_project(const std::vector<SetPtr>& sets, const Vector& x, int max_iters = 500,
                              double tol = 1e-9);

std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& text);

}  // namespace dagp
