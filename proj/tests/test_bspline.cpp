#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "gapmm/bspline.hpp"
#include "gapmm/quadrature.hpp"
#include "gapmm/radial_grid.hpp"

using namespace gapmm;

namespace {

SplineBasis make_basis(int n_intervals = 12, int order = 5, double r_max = 8.0,
                       double stretch = 1.1) {
  return SplineBasis(RadialGrid::exponential(r_max, n_intervals, stretch), order);
}

}  // namespace

TEST_CASE("retained count is intervals + order - 3") {
  for (int order : {2, 4, 7}) {
    for (int n : {8, 20, 96}) {
      const SplineBasis basis(RadialGrid::exponential(30.0, n, 1.1), order);
      CHECK(basis.size() == n + order - 3);
    }
  }
  CHECK(SplineBasis(RadialGrid::exponential(50.0, 96, 1.18), 7).size() == 100);
}

TEST_CASE("full spline set is a partition of unity on every interval") {
  const SplineBasis basis = make_basis();
  const auto& breaks = basis.breakpoints();
  for (std::size_t cell = 0; cell + 1 < breaks.size(); ++cell) {
    for (double t : {0.13, 0.5, 0.91}) {
      const double r = breaks[cell] + t * (breaks[cell + 1] - breaks[cell]);
      const auto le = basis.eval_local(r);
      double sum = 0.0, dsum = 0.0;
      for (int i = 0; i < basis.order(); ++i) {
        CHECK(le.value[i] >= -1e-14);
        sum += le.value[i];
        dsum += le.deriv[i];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(dsum) < 1e-9);
    }
  }
}

TEST_CASE("retained splines vanish at both endpoints") {
  const SplineBasis basis = make_basis();
  const double r_max = basis.breakpoints().back();
  for (int i = 0; i < basis.size(); ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(basis.size());
    e[i] = 1.0;
    CHECK(std::abs(basis.eval(e, 0.0)) < 1e-14);
    CHECK(std::abs(basis.eval(e, r_max)) < 1e-14);
  }
}

TEST_CASE("derivative matches a finite difference") {
  const SplineBasis basis = make_basis();
  Eigen::VectorXd c(basis.size());
  for (int i = 0; i < c.size(); ++i) c[i] = std::sin(0.7 * i + 0.3);
  const double h = 1e-6;
  for (double r : {0.4, 1.7, 3.2, 6.9}) {
    const double fd = (basis.eval(c, r + h) - basis.eval(c, r - h)) / (2.0 * h);
    CHECK(basis.eval_deriv(c, r) == doctest::Approx(fd).epsilon(1e-6));
  }
}

namespace {

// L2 fit of f onto the full spline set (use_retained = false, indices are
// first_full + i) or the retained endpoint-vanishing subspace.
Eigen::VectorXd l2_fit(const SplineBasis& basis, bool use_retained,
                       const std::function<double(double)>& f) {
  const GaussRule rule = gauss_legendre(8);
  const auto& breaks = basis.breakpoints();
  const int n = use_retained ? basis.size() : basis.size() + 2;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t cell = 0; cell + 1 < breaks.size(); ++cell) {
    const double half = 0.5 * (breaks[cell + 1] - breaks[cell]);
    const double mid = 0.5 * (breaks[cell + 1] + breaks[cell]);
    for (int q = 0; q < rule.size(); ++q) {
      const double r = mid + half * rule.nodes[q];
      const double w = half * rule.weights[q];
      const auto le = basis.eval_local(r);
      for (int i = 0; i < basis.order(); ++i) {
        const int ri =
            use_retained ? basis.retained_index(le.first_full + i) : le.first_full + i;
        if (ri < 0) continue;
        rhs[ri] += w * le.value[i] * f(r);
        for (int j = 0; j < basis.order(); ++j) {
          const int rj =
              use_retained ? basis.retained_index(le.first_full + j) : le.first_full + j;
          if (rj < 0) continue;
          gram(ri, rj) += w * le.value[i] * le.value[j];
        }
      }
    }
  }
  return Eigen::LLT<Eigen::MatrixXd>(gram).solve(rhs);
}

double eval_full(const SplineBasis& basis, const Eigen::VectorXd& c, double r) {
  const auto le = basis.eval_local(r);
  double acc = 0.0;
  for (int i = 0; i < basis.order(); ++i) acc += c[le.first_full + i] * le.value[i];
  return acc;
}

}  // namespace

TEST_CASE("splines reproduce polynomials up to their degree") {
  const SplineBasis basis = make_basis(10, 4, 5.0, 1.0);

  // The full order-4 set contains every cubic, so the L2 fit of x^2 is exact.
  const Eigen::VectorXd cf = l2_fit(basis, false, [](double r) { return r * r; });
  for (double r : {0.3, 1.1, 2.0, 2.9, 3.4, 4.7}) {
    CHECK(eval_full(basis, cf, r) == doctest::Approx(r * r).epsilon(1e-10));
  }

  // Dropping the endpoint splines keeps exactly the polynomials vanishing at
  // both ends, so x(r_max - x) is still reproduced exactly; x^2 is not (its
  // projection carries a boundary ghost decaying into the interior).
  const double r_max = basis.breakpoints().back();
  const Eigen::VectorXd cr =
      l2_fit(basis, true, [r_max](double r) { return r * (r_max - r); });
  for (double r : {0.3, 1.1, 2.0, 2.9, 3.4, 4.7}) {
    CHECK(basis.eval(cr, r) == doctest::Approx(r * (r_max - r)).epsilon(1e-10));
  }
  const Eigen::VectorXd cq = l2_fit(basis, true, [](double r) { return r * r; });
  CHECK(std::abs(basis.eval(cq, 3.4) - 3.4 * 3.4) > 1e-4);
}

TEST_CASE("eval_local agrees with eval on random coefficient vectors") {
  const SplineBasis basis = make_basis(14, 6, 12.0, 1.2);
  Eigen::VectorXd c(basis.size());
  for (int i = 0; i < c.size(); ++i) c[i] = std::cos(1.3 * i);
  for (double r : {0.05, 0.9, 4.0, 11.2}) {
    const auto le = basis.eval_local(r);
    double acc = 0.0;
    for (int i = 0; i < basis.order(); ++i) {
      const int ri = basis.retained_index(le.first_full + i);
      if (ri >= 0) acc += c[ri] * le.value[i];
    }
    CHECK(acc == doctest::Approx(basis.eval(c, r)).epsilon(1e-12));
  }
}

TEST_CASE("constructor rejects bad parameters") {
  CHECK_THROWS_AS(SplineBasis(RadialGrid::exponential(10.0, 8, 1.1), 1), std::invalid_argument);
  CHECK_THROWS_AS(SplineBasis(RadialGrid::exponential(10.0, 8, 1.1), kMaxSplineOrder + 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(SplineBasis(RadialGrid::exponential(-5.0, 8, 1.1), 4), std::invalid_argument);
}
