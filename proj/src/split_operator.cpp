#include "gapmm/split_operator.hpp"

#include <stdexcept>

#include <Eigen/Cholesky>

namespace gapmm {

Eigen::MatrixXd SplitOperator::full_a() const {
  const int np = dim_plus(), nm = dim_minus();
  Eigen::MatrixXd a(np + nm, np + nm);
  a.topLeftCorner(np, np) = a_pp;
  a.topRightCorner(np, nm) = a_pm;
  a.bottomLeftCorner(nm, np) = a_pm.transpose();
  a.bottomRightCorner(nm, nm) = a_mm;
  return a;
}

Eigen::MatrixXd SplitOperator::full_s() const {
  const int np = dim_plus(), nm = dim_minus();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(np + nm, np + nm);
  s.topLeftCorner(np, np) = s_pp;
  s.bottomRightCorner(nm, nm) = s_mm;
  return s;
}

void SplitOperator::validate(double tol) const {
  const int np = dim_plus(), nm = dim_minus();
  if (np < 1 || nm < 1) throw std::invalid_argument("SplitOperator: both blocks must be nonempty");
  if (a_pp.cols() != np || a_mm.cols() != nm || a_pm.rows() != np || a_pm.cols() != nm ||
      s_pp.rows() != np || s_pp.cols() != np || s_mm.rows() != nm || s_mm.cols() != nm) {
    throw std::invalid_argument("SplitOperator: inconsistent block shapes");
  }
  const double scale = 1.0 + a_pp.cwiseAbs().maxCoeff() + a_mm.cwiseAbs().maxCoeff();
  if ((a_pp - a_pp.transpose()).cwiseAbs().maxCoeff() > tol * scale ||
      (a_mm - a_mm.transpose()).cwiseAbs().maxCoeff() > tol * scale ||
      (s_pp - s_pp.transpose()).cwiseAbs().maxCoeff() > tol * scale ||
      (s_mm - s_mm.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument("SplitOperator: blocks are not symmetric");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(s_pp).info() != Eigen::Success ||
      Eigen::LLT<Eigen::MatrixXd>(s_mm).info() != Eigen::Success) {
    throw std::invalid_argument("SplitOperator: Gram blocks are not positive definite");
  }
}

SplitOperator SplitOperator::from_full(const Eigen::MatrixXd& a, int dim_plus) {
  return from_full(a, Eigen::MatrixXd::Identity(a.rows(), a.cols()), dim_plus);
}

SplitOperator SplitOperator::from_full(const Eigen::MatrixXd& a, const Eigen::MatrixXd& s,
                                       int dim_plus) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || s.rows() != n || s.cols() != n) {
    throw std::invalid_argument("SplitOperator::from_full: square matrices required");
  }
  if (dim_plus < 1 || dim_plus >= n) {
    throw std::invalid_argument("SplitOperator::from_full: dim_plus out of range");
  }
  const int nm = n - dim_plus;
  const double cross = s.topRightCorner(dim_plus, nm).cwiseAbs().maxCoeff();
  if (cross > 1e-10 * (1.0 + s.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("SplitOperator::from_full: Gram couples the blocks");
  }
  SplitOperator op;
  op.a_pp = a.topLeftCorner(dim_plus, dim_plus);
  op.a_pm = a.topRightCorner(dim_plus, nm);
  op.a_mm = a.bottomRightCorner(nm, nm);
  op.s_pp = s.topLeftCorner(dim_plus, dim_plus);
  op.s_mm = s.bottomRightCorner(nm, nm);
  op.validate();
  return op;
}

}  // namespace gapmm
