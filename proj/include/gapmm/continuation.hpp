#pragma once

#include <memory>
#include <vector>

#include "gapmm/bspline.hpp"
#include "gapmm/dirac_radial.hpp"

namespace gapmm {

// Shared setup for coupling-constant sweeps of the regularized Coulomb
// channel V(r) = -nu / (r + epsilon).
struct ContinuationOptions {
  int kappa = -1;
  double mass = 1.0;
  std::shared_ptr<const SplineBasis> basis;
  SolveOptions solve;
  // Tolerance granted to the monotonicity / Lipschitz comparisons on top of
  // the exact inequalities; absorbs root-finder noise.
  double slack = 1e-7;
  double edge_margin = 1e-3;
};

struct SweepPoint {
  double nu = 0.0;
  double epsilon = 0.0;
  double lambda1 = 0.0;
  double a_value = 0.0;
  double residual = 0.0;
  bool hypotheses_ok = false;
  bool solved = false;
  bool in_gap = false;
};

// First level along an ascending nu grid at fixed epsilon. The potential
// depends 1-Lipschitz-in-nu/epsilon on the coupling, so consecutive levels
// must not increase and must not drop by more than dnu / epsilon.
struct NuSweepResult {
  std::vector<SweepPoint> points;
  bool all_solved = false;
  bool monotone_ok = false;
  bool lipschitz_ok = false;
  double worst_increase = 0.0;    // max positive jump of lambda1
  double worst_excess_drop = 0.0; // max drop beyond the Lipschitz bound
};
NuSweepResult nu_sweep(const std::vector<double>& nu_values, double epsilon,
                       const ContinuationOptions& opts);

// First level along a descending epsilon list at fixed nu. Shrinking epsilon
// lowers the potential pointwise, so lambda1 must not increase along the
// list; the epsilon -> 0 limit is compared against the point-Coulomb value
// via polynomial extrapolation through the final points.
struct RefineResult {
  std::vector<SweepPoint> points;
  bool all_solved = false;
  bool monotone_ok = false;
  double worst_increase = 0.0;
  double extrapolated = 0.0;       // Neville value at epsilon = 0
  double analytic = 0.0;           // point-Coulomb ground level
  double extrapolation_gap = 0.0;  // |extrapolated - analytic|
};
RefineResult epsilon_refine(double nu, const std::vector<double>& eps_values,
                            const ContinuationOptions& opts);

// Single regularized-Coulomb solve; shared by both sweep directions.
SweepPoint sweep_point(double nu, double epsilon, const ContinuationOptions& opts);

}  // namespace gapmm
