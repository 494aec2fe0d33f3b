#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace dagp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Node-major layout: row v holds node v's local vector.
using NodeMatrix = Matrix;

}  // namespace dagp
