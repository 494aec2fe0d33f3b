#include "dagp/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "dagp/parallel.hpp"

namespace dagp {

namespace {

void require_dim(const Vector& x, Eigen::Index expected, const char* who) {
  if (x.size() != expected) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
}

}  // namespace

double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------------------

LogCoshFunction::LogCoshFunction(Vector a, double b) : a_(std::move(a)), b_(b) {}

double LogCoshFunction::value(const Vector& x) const {
  require_dim(x, a_.size(), "LogCoshFunction::value");
  return log_cosh(a_.dot(x) - b_);
}

Vector LogCoshFunction::gradient(const Vector& x) const {
  require_dim(x, a_.size(), "LogCoshFunction::gradient");
  return std::tanh(a_.dot(x) - b_) * a_;
}

QuadraticFunction::QuadraticFunction(Vector center, double scale)
    : center_(std::move(center)), scale_(scale) {
  if (scale_ < 0.0) throw std::invalid_argument("QuadraticFunction: negative scale");
}

double QuadraticFunction::value(const Vector& x) const {
  require_dim(x, center_.size(), "QuadraticFunction::value");
  return 0.5 * scale_ * (x - center_).squaredNorm();
}

Vector QuadraticFunction::gradient(const Vector& x) const {
  require_dim(x, center_.size(), "QuadraticFunction::gradient");
  return scale_ * (x - center_);
}

LogisticLoss::LogisticLoss(Matrix features, Vector labels, double lambda)
    : features_(std::move(features)), labels_(std::move(labels)), lambda_(lambda) {
  if (features_.rows() != labels_.size()) {
    throw std::invalid_argument("LogisticLoss: sample/label count mismatch");
  }
  if (lambda_ < 0.0) throw std::invalid_argument("LogisticLoss: negative lambda");
  for (Eigen::Index i = 0; i < labels_.size(); ++i) {
    if (labels_(i) != 1.0 && labels_(i) != -1.0) {
      throw std::invalid_argument("LogisticLoss: labels must be +1 or -1");
    }
  }
  double top = 0.0;
  if (features_.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(features_.transpose() * features_,
                                              Eigen::EigenvaluesOnly);
    top = eig.eigenvalues().maxCoeff();
  }
  smoothness_ = lambda_ + 0.25 * top;
}

double LogisticLoss::value(const Vector& w) const {
  require_dim(w, features_.cols(), "LogisticLoss::value");
  const Vector margins = features_ * w;
  double total = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) total += softplus(-labels_(i) * margins(i));
  return total + 0.5 * lambda_ * w.squaredNorm();
}

Vector LogisticLoss::gradient(const Vector& w) const {
  require_dim(w, features_.cols(), "LogisticLoss::gradient");
  const Vector margins = features_ * w;
  Vector weights(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    weights(i) = -labels_(i) * sigmoid(-labels_(i) * margins(i));
  }
  return features_.transpose() * weights + lambda_ * w;
}

// ---------------------------------------------------------------------------

Halfspace::Halfspace(Vector c, double d) : c_(std::move(c)), d_(d) {
  if (!(c_.norm() > 0.0)) throw std::invalid_argument("Halfspace: zero normal");
}

Vector Halfspace::project(const Vector& x) const {
  require_dim(x, c_.size(), "Halfspace::project");
  const double violation = c_.dot(x) - d_;
  if (violation <= 0.0) return x;
  return x - (violation / c_.squaredNorm()) * c_;
}

double Halfspace::distance(const Vector& x) const {
  require_dim(x, c_.size(), "Halfspace::distance");
  return std::max(0.0, c_.dot(x) - d_) / c_.norm();
}

bool Halfspace::contains(const Vector& x, double tol) const { return distance(x) <= tol; }

Matrix Halfspace::normal_generators(const Vector& x, double activity) const {
  if (std::abs(c_.dot(x) - d_) / c_.norm() <= activity) return c_;
  return Matrix(c_.size(), 0);
}

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || (lower_.array() > upper_.array()).any()) {
    throw std::invalid_argument("Box: inconsistent bounds");
  }
}

Vector Box::project(const Vector& x) const {
  require_dim(x, lower_.size(), "Box::project");
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

Matrix Box::normal_generators(const Vector& x, double activity) const {
  std::vector<Vector> cols;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i) - upper_(i)) <= activity) cols.push_back(Vector::Unit(x.size(), i));
    if (std::abs(x(i) - lower_(i)) <= activity) cols.push_back(-Vector::Unit(x.size(), i));
  }
  Matrix out(x.size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = cols[k];
  return out;
}

Ball::Ball(Vector center, double radius) : center_(std::move(center)), radius_(radius) {
  if (radius_ < 0.0) throw std::invalid_argument("Ball: negative radius");
}

Vector Ball::project(const Vector& x) const {
  require_dim(x, center_.size(), "Ball::project");
  const Vector offset = x - center_;
  const double r = offset.norm();
  if (r <= radius_) return x;
  return center_ + (radius_ / r) * offset;
}

Matrix Ball::normal_generators(const Vector& x, double activity) const {
  const Vector offset = x - center_;
  if (std::abs(offset.norm() - radius_) <= activity && offset.norm() > 0.0) return offset;
  return Matrix(x.size(), 0);
}

// ---------------------------------------------------------------------------

void ProblemInstance::validate() const {
  if (functions.empty()) throw std::invalid_argument("ProblemInstance: no nodes");
  if (sets.size() != functions.size()) {
    throw std::invalid_argument("ProblemInstance: function and set counts differ");
  }
  for (std::size_t v = 0; v < functions.size(); ++v) {
    if (!functions[v] || !sets[v]) throw std::invalid_argument("ProblemInstance: null entry");
    if (functions[v]->dimension() != dimension || sets[v]->dimension() != dimension) {
      throw std::invalid_argument("ProblemInstance: node " + std::to_string(v) +
                                  " has the wrong dimension");
    }
  }
  if (witness && witness->size() != dimension) {
    throw std::invalid_argument("ProblemInstance: witness dimension mismatch");
  }
}

double ProblemInstance::objective(const Vector& x) const {
  double total = 0.0;
  for (const auto& f : functions) total += f->value(x);
  return total;
}

Vector ProblemInstance::gradient(const Vector& x) const {
  Vector g = Vector::Zero(dimension);
  for (const auto& f : functions) g += f->gradient(x);
  return g;
}

double ProblemInstance::local_objective_sum(const NodeMatrix& X) const {
  double total = 0.0;
  for (int v = 0; v < node_count(); ++v) total += functions[v]->value(X.row(v).transpose());
  return total;
}

double ProblemInstance::max_smoothness() const {
  double L = 0.0;
  for (const auto& f : functions) L = std::max(L, f->smoothness_bound());
  return L;
}

double ProblemInstance::total_smoothness() const {
  double L = 0.0;
  for (const auto& f : functions) L += f->smoothness_bound();
  return L;
}

bool ProblemInstance::unconstrained() const {
  return std::all_of(sets.begin(), sets.end(), [](const SetPtr& s) {
    return dynamic_cast<const WholeSpace*>(s.get()) != nullptr;
  });
}

NodeMatrix local_gradients(const ProblemInstance& inst, const NodeMatrix& X, int workers) {
  NodeMatrix grad(X.rows(), X.cols());
  parallel_for(static_cast<int>(X.rows()), workers, [&](int v) {
    grad.row(v) = inst.functions[v]->gradient(X.row(v).transpose()).transpose();
  });
  return grad;
}

NodeMatrix local_projections(const ProblemInstance& inst, const NodeMatrix& Z, int workers) {
  NodeMatrix out(Z.rows(), Z.cols());
  parallel_for(static_cast<int>(Z.rows()), workers, [&](int v) {
    out.row(v) = inst.sets[v]->project(Z.row(v).transpose()).transpose();
  });
  return out;
}

// ---------------------------------------------------------------------------

DykstraResult dykstra_project(const std::vector<SetPtr>& sets, const Vector& x, int max_iters,
                              double tol) {
  if (sets.empty()) throw std::invalid_argument("dykstra_project: empty set list");

  std::vector<const ConvexSet*> active;
  for (const auto& s : sets) {
    if (dynamic_cast<const WholeSpace*>(s.get()) == nullptr) active.push_back(s.get());
  }
  DykstraResult result{x, 0, true, 0.0};
  if (active.empty()) return result;
  if (active.size() == 1) {
    result.point = active.front()->project(x);
    return result;
  }

  std::vector<Vector> increments(active.size(), Vector::Zero(x.size()));
  Vector y = x;
  result.converged = false;
  for (int it = 1; it <= max_iters; ++it) {
    double change = 0.0;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const Vector shifted = y + increments[k];
      y = active[k]->project(shifted);
      const Vector next = shifted - y;
      change += (next - increments[k]).squaredNorm();
      increments[k] = next;
    }
    result.iterations = it;
    if (std::sqrt(change) <= tol) {
      double worst = 0.0;
      for (const auto* s : active) worst = std::max(worst, s->distance(y));
      if (worst <= tol) {
        result.converged = true;
        break;
      }
    }
  }
  result.point = y;
  result.max_distance = 0.0;
  for (const auto* s : active) result.max_distance = std::max(result.max_distance, s->distance(y));
  return result;
}

}  // namespace dagp
