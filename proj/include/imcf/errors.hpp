#pragma once

#include <stdexcept>
#include <string>

namespace imcf {

/// Metric lost positive definiteness (Cholesky pivot <= 0) at a grid node.
struct NotPositiveDefinite : std::runtime_error {
  long node;
  explicit NotPositiveDefinite(long node_)
      : std::runtime_error("metric not positive definite at node " +
                           std::to_string(node_)),
        node(node_) {}
};

/// det(g) <= 0 encountered while forming a volume element.
struct NegativeDeterminant : std::runtime_error {
  long node;
  explicit NegativeDeterminant(long node_)
      : std::runtime_error("non-positive metric determinant at node " +
                           std::to_string(node_)),
        node(node_) {}
};

/// Graph constructor rejected data with |grad u| >= 1 somewhere.
struct NotSpacelike : std::runtime_error {
  double max_gradient;
  explicit NotSpacelike(double max_gradient_)
      : std::runtime_error("graph is not space-like: max |grad u| = " +
                           std::to_string(max_gradient_) + " >= 1"),
        max_gradient(max_gradient_) {}
};

/// Constraint residual crossed the configured abort ceiling during a flow.
struct ResidualBlowup : std::runtime_error {
  double value;
  double ceiling;
  ResidualBlowup(double value_, double ceiling_)
      : std::runtime_error("constraint residual " + std::to_string(value_) +
                           " exceeded abort ceiling " +
                           std::to_string(ceiling_)),
        value(value_),
        ceiling(ceiling_) {}
};

/// Homogeneous state handed to an operation that requires phi = psi^2
/// (hyperbolic base) or psi = 0 (flat base).
struct ConstraintViolation : std::runtime_error {
  double defect;
  explicit ConstraintViolation(double defect_)
      : std::runtime_error("homogeneous state off the phi = psi^2 manifold, "
                           "|phi - psi^2| = " +
                           std::to_string(defect_)),
        defect(defect_) {}
};

}  // namespace imcf
