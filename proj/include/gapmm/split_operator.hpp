#pragma once

#include <Eigen/Core>

namespace gapmm {

// Symmetric operator A together with an orthogonal decomposition of the
// underlying space into a "+" and a "-" block. All blocks are matrices of
// bilinear forms with respect to the (possibly non-orthonormal) basis whose
// Gram matrices are s_pp and s_mm; the cross Gram vanishes by construction.
struct SplitOperator {
  Eigen::MatrixXd a_pp;  // (x+, A y+)
  Eigen::MatrixXd a_mm;  // (x-, A y-)
  Eigen::MatrixXd a_pm;  // (x+, A y-), dim_plus x dim_minus
  Eigen::MatrixXd s_pp;
  Eigen::MatrixXd s_mm;

  int dim_plus() const { return static_cast<int>(a_pp.rows()); }
  int dim_minus() const { return static_cast<int>(a_mm.rows()); }
  int dim() const { return dim_plus() + dim_minus(); }

  Eigen::MatrixXd full_a() const;
  Eigen::MatrixXd full_s() const;

  // Symmetry of the diagonal blocks and positive definiteness of the Gram
  // blocks; throws on violation.
  void validate(double tol = 1e-10) const;

  // Split a full matrix pair by coordinates: the first dim_plus ones form the
  // "+" block. S defaults to the identity.
  static SplitOperator from_full(const Eigen::MatrixXd& a, int dim_plus);
  static SplitOperator from_full(const Eigen::MatrixXd& a, const Eigen::MatrixXd& s,
                                 int dim_plus);
};

}  // namespace gapmm
