#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gapmm/bspline.hpp"

namespace gapmm {

// Scalar radial test function with an explicit derivative.
struct RadialFunction {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

// (r/s)(1 - r/s)^3 on [0, s], zero beyond; concentrates at the origin as
// s -> 0.
RadialFunction bump_function(double scale);

// r^gamma e^{-nu r} with gamma = sqrt(kappa^2 - nu^2): the point-Coulomb
// ground-state upper component shape.
RadialFunction ground_state_function(double nu, int kappa);

// r e^{-r}: a smooth closed-form test function.
RadialFunction exp_linear_function();

struct TestFamily {
  enum class Kind { kRandomSpline, kBumps, kGroundState };
  Kind kind = Kind::kRandomSpline;
  int count = 32;  // random draws for the spline family
  unsigned long long seed = 24601;
  std::vector<double> scales = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
  double nu = 0.5;  // ground-state family parameter
};

struct TestFunction {
  std::string id;
  RadialFunction f;
  double r_support = 1.0;  // integration upper limit
};
std::vector<TestFunction> make_family(const TestFamily& fam);

struct MarginRecord {
  std::string inequality;
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double scale = 0.0;   // |lhs| + |rhs|
};

// Per-interval Gauss quadrature on an exponentially graded subdivision of
// [0, r_max]; the first interval gets a higher-order rule to control
// 1/r-weighted integrands against functions vanishing at the origin.
struct QuadratureSpec {
  int n_intervals = 320;
  double stretch = 1.06;
  int gauss = 16;
  int first_interval_boost = 2;
};
double integrate_radial(const std::function<double(double)>& f, double r_max,
                        const QuadratureSpec& spec = {});

// nu int f^2/r + sqrt(1-nu^2) int f^2  <=
//   int (f' + kappa f/r)^2 / (nu/r + 1 + sqrt(1-nu^2)) + int f^2,
// for 0 <= nu <= 1.
std::vector<MarginRecord> talman_inhomogeneous_margins(const TestFamily& fam, double nu,
                                                       int kappa);

// int f^2/r <= int r (f' + kappa f/r)^2.
std::vector<MarginRecord> talman_homogeneous_margins(const TestFamily& fam, int kappa);

// int u^2/r^2 <= 4 int u'^2 on the same families.
std::vector<MarginRecord> classical_hardy_margins(const TestFamily& fam);

// The inhomogeneous margin at nu = 1 on bumps of shrinking support converges
// to the (scale-invariant) homogeneous margin of the same profile.
struct BumpConvergence {
  std::vector<double> scales;
  std::vector<double> inhomogeneous_margins;
  double homogeneous_margin = 0.0;
  double relative_gap_at_smallest = 0.0;
};
BumpConvergence bump_margin_convergence(const std::vector<double>& scales, int kappa);

// Discretized free-energy inequality: random vectors in the "+" free modes,
//   nu (x, R++ x) + E (x, x) <= (x, diag(eps+) x) + nu^2 (C x, Mden^{-1} C x),
// with R the 1/r coupling in the free eigenbasis, C its -/+ block, and
// Mden = diag|eps-| + nu R-- + E. Massive case: E = sqrt(1 - nu^2); zero
// mass: nu = 1, E = 0. Everything lives at the discretized level: the
// projectors come from the assembled finite basis, not the continuum.
struct FreeEnergyMarginOptions {
  double nu = 0.5;
  int kappa = -1;
  double mass = 1.0;  // 0 selects the homogeneous zero-mass version
  int count = 100;
  unsigned long long seed = 31415;
  double r_max = 60.0;
  int n_intervals = 56;
  double stretch = 1.12;
  int order = 7;
};
std::vector<MarginRecord> free_energy_margins(const FreeEnergyMarginOptions& opts);

double min_margin(const std::vector<MarginRecord>& records);
double median_margin(std::vector<MarginRecord> records);
// Largest ratio margin / scale violation: min over records of margin, but
// normalized by the record scale; >= -tol is the acceptance form.
double min_relative_margin(const std::vector<MarginRecord>& records);

}  // namespace gapmm
