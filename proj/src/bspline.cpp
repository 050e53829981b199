#include "gapmm/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gapmm {

SplineBasis::SplineBasis(const RadialGrid& grid, int order)
    : grid_(grid), order_(order), n_full_(grid.n_intervals + order - 1) {
  if (order < 2 || order > kMaxSplineOrder) {
    throw std::invalid_argument("SplineBasis: order out of range");
  }
  if (size() < 1) throw std::invalid_argument("SplineBasis: basis is empty");
  breaks_ = grid_.breakpoints();
  for (std::size_t i = 1; i < breaks_.size(); ++i) {
    if (!(breaks_[i] > breaks_[i - 1])) {
      throw std::invalid_argument("SplineBasis: breakpoints not increasing");
    }
  }
  knots_.reserve(breaks_.size() + 2 * (order_ - 1));
  knots_.insert(knots_.end(), order_, breaks_.front());
  knots_.insert(knots_.end(), breaks_.begin() + 1, breaks_.end() - 1);
  knots_.insert(knots_.end(), order_, breaks_.back());
}

SplineBasis::LocalEval SplineBasis::eval_local(double r) const {
  if (r < breaks_.front() || r > breaks_.back()) {
    throw std::domain_error("SplineBasis: point outside grid");
  }
  // Breakpoint interval containing r, clamped so r = r_max uses the last one.
  int cell = int(std::upper_bound(breaks_.begin(), breaks_.end(), r) - breaks_.begin()) - 1;
  cell = std::clamp(cell, 0, grid_.n_intervals - 1);
  const int p = order_ - 1;                // degree
  const int span = cell + p;               // knots_[span] <= r < knots_[span+1]

  // Cox-de Boor triangle, keeping the degree p-1 row for derivatives.
  std::array<double, kMaxSplineOrder> left{}, right{}, lower{}, work{};
  work[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    if (j == p) std::copy(work.begin(), work.begin() + j, lower.begin());
    left[j] = r - knots_[span + 1 - j];
    right[j] = knots_[span + j] - r;
    double saved = 0.0;
    for (int k = 0; k < j; ++k) {
      const double tmp = work[k] / (right[k + 1] + left[j - k]);
      work[k] = saved + right[k + 1] * tmp;
      saved = left[j - k] * tmp;
    }
    work[j] = saved;
  }

  LocalEval out;
  out.first_full = span - p;
  for (int i = 0; i <= p; ++i) out.value[i] = work[i];
  if (p == 0) return out;
  // d/dr N_{i,p} = p * (lower_i / (t_{i+p} - t_i) - lower_{i+1} / (t_{i+p+1} - t_{i+1}))
  for (int i = 0; i <= p; ++i) {
    const int gi = out.first_full + i;
    double d = 0.0;
    if (i > 0) {
      const double den = knots_[gi + p] - knots_[gi];
      if (den > 0.0) d += lower[i - 1] / den;
    }
    if (i < p) {
      const double den = knots_[gi + p + 1] - knots_[gi + 1];
      if (den > 0.0) d -= lower[i] / den;
    }
    out.deriv[i] = p * d;
  }
  return out;
}

double SplineBasis::eval(const Eigen::VectorXd& coeffs, double r) const {
  if (coeffs.size() != size()) throw std::invalid_argument("SplineBasis::eval: size mismatch");
  const LocalEval le = eval_local(r);
  double sum = 0.0;
  for (int i = 0; i < order_; ++i) {
    const int ri = retained_index(le.first_full + i);
    if (ri >= 0) sum += coeffs[ri] * le.value[i];
  }
  return sum;
}

double SplineBasis::eval_deriv(const Eigen::VectorXd& coeffs, double r) const {
  if (coeffs.size() != size()) throw std::invalid_argument("SplineBasis::eval_deriv: size mismatch");
  const LocalEval le = eval_local(r);
  double sum = 0.0;
  for (int i = 0; i < order_; ++i) {
    const int ri = retained_index(le.first_full + i);
    if (ri >= 0) sum += coeffs[ri] * le.deriv[i];
  }
  return sum;
}

}  // namespace gapmm
