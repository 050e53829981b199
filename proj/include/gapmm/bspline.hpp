#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "gapmm/radial_grid.hpp"

namespace gapmm {

inline constexpr int kMaxSplineOrder = 15;

// Clamped B-spline basis on a radial grid. The first and last splines (the
// only ones not vanishing at the endpoints) are dropped, so every retained
// function satisfies f(0) = f(r_max) = 0.
class SplineBasis {
 public:
  SplineBasis(const RadialGrid& grid, int order);

  int order() const { return order_; }
  int size() const { return n_full_ - 2; }
  int n_intervals() const { return grid_.n_intervals; }
  const RadialGrid& grid() const { return grid_; }
  const std::vector<double>& breakpoints() const { return breaks_; }

  // Values/derivatives of the `order` splines supported on the interval
  // containing r. Local slot i corresponds to full-basis index
  // first_full + i; use retained_index() to map into the retained basis.
  struct LocalEval {
    int first_full = 0;
    std::array<double, kMaxSplineOrder> value{};
    std::array<double, kMaxSplineOrder> deriv{};
  };
  LocalEval eval_local(double r) const;

  // Retained index of a full-basis spline, or -1 for a dropped boundary one.
  int retained_index(int full) const {
    return (full <= 0 || full >= n_full_ - 1) ? -1 : full - 1;
  }

  double eval(const Eigen::VectorXd& coeffs, double r) const;
  double eval_deriv(const Eigen::VectorXd& coeffs, double r) const;

 private:
  RadialGrid grid_;
  int order_;
  int n_full_;
  std::vector<double> breaks_;
  std::vector<double> knots_;
};

}  // namespace gapmm
