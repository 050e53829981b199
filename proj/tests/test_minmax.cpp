#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "gapmm/minmax.hpp"
#include "gapmm/properties.hpp"
#include "gapmm/random_pencils.hpp"
#include "gapmm/split_operator.hpp"

using namespace gapmm;

namespace {

// [[1, 1], [1, -1]] split by coordinates: eigenvalues are +-sqrt(2), the gap
// constant is -1, and every Schur quantity is available in closed form.
SplitOperator two_by_two() {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 1.0, 1.0, -1.0;
  return SplitOperator::from_full(a, 1);
}

}  // namespace

TEST_CASE("closed-form Schur quantities of the 2x2 example") {
  const SplitOperator op = two_by_two();
  CHECK(gap_constant(op) == doctest::Approx(-1.0).epsilon(1e-14));

  // q(E) = 1 - E + 1/(1+E); g(E) = 1 + 1/(1+E)^2.
  const SchurPencil sp0 = schur_pencil(op, 0.0);
  CHECK(sp0.q_matrix(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sp0.g_matrix(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  const SchurPencil sp5 = schur_pencil(op, 0.5);
  CHECK(sp5.q_matrix(0, 0) == doctest::Approx(0.5 + 2.0 / 3.0).epsilon(1e-14));
  CHECK(sp5.g_matrix(0, 0) == doctest::Approx(1.0 + 4.0 / 9.0).epsilon(1e-14));

  // The maximizer of phi over the "-" block is y = x / (1 + E).
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd y = maximizer_L(op, 0.5, x);
  CHECK(y[0] == doctest::Approx(1.0 / 1.5).epsilon(1e-14));
  CHECK(phi_form(op, 0.5, x, y) == doctest::Approx(sp5.q_matrix(0, 0)).epsilon(1e-14));
  // Any other y gives a strictly smaller form value.
  Eigen::VectorXd y2 = y;
  y2[0] += 0.1;
  CHECK(phi_form(op, 0.5, x, y2) < phi_form(op, 0.5, x, y));

  const MinMaxSolution sol = solve_level(op, 1, 1e-12);
  CHECK(sol.lambda == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
  CHECK(sol.residual < 1e-9);
  CHECK(sol.multiplicity == 1);

  // ell_1 must vanish at the level and be positive/negative on either side.
  CHECK(ell_k(op, sol.lambda, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(ell_k(op, 1.0, 1) > 0.0);
  CHECK(ell_k(op, 2.0, 1) < 0.0);

  // Eigenvector reconstruction solves the full problem.
  const Eigen::VectorXd v = reconstruct_eigenvector(op, sol);
  const Eigen::VectorXd r = op.full_a() * v - sol.lambda * v;
  CHECK(r.norm() < 1e-10);
}

TEST_CASE("lambda_of_vector is scaling invariant and matches the level on the eigenvector") {
  const SplitOperator op = two_by_two();
  Eigen::VectorXd x(1);
  x << 1.0;
  const double lam = lambda_of_vector(op, x, 1e-12);
  CHECK(lam == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
  Eigen::VectorXd xs = 17.3 * x;
  CHECK(lambda_of_vector(op, xs, 1e-12) == doctest::Approx(lam).epsilon(1e-11));
}

TEST_CASE("decoupled diagonal pencil solves exactly") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a.diagonal() << 2.0, 5.0, -1.0;  // dim_plus = 2, dim_minus = 1
  const SplitOperator op = SplitOperator::from_full(a, 2);
  CHECK(gap_constant(op) == doctest::Approx(-1.0));
  CHECK(solve_level(op, 1, 1e-12).lambda == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(solve_level(op, 2, 1e-12).lambda == doctest::Approx(5.0).epsilon(1e-11));
}

TEST_CASE("degenerate levels report multiplicity") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a.diagonal() << 1.0, 1.0, -1.0;
  const SplitOperator op = SplitOperator::from_full(a, 2);
  const MinMaxSolution sol = solve_level(op, 1, 1e-12);
  CHECK(sol.lambda == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(sol.multiplicity == 2);
}

TEST_CASE("a '+' branch sunk below the '-' top is refused") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a.diagonal() << -2.0, -1.0;
  const SplitOperator op = SplitOperator::from_full(a, 1);
  CHECK(gap_constant(op) == doctest::Approx(-1.0));
  const HypothesisReport rep = check_hypotheses(op, -0.5);
  CHECK(rep.condition_ii);
  CHECK_FALSE(rep.condition_iii);
  CHECK_FALSE(rep.pass());
  CHECK_THROWS_AS((void)solve_level(op, 1, 1e-10), BracketError);
}

TEST_CASE("probing at or below the gap constant is rejected") {
  const SplitOperator op = two_by_two();
  CHECK_THROWS_AS((void)check_hypotheses(op, -1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)schur_pencil(op, -1.5), HypothesisError);
  CHECK_THROWS_AS((void)solve_level(op, 0, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS((void)solve_level(op, 2, 1e-10), std::invalid_argument);
}

TEST_CASE("negative_count handles strong grading") {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(3, 3);
  q.diagonal() << -1.0, 1e-13, 5.0;
  CHECK(negative_count(q) == 1);
  // A graded congruence preserves the inertia and must not fool the count.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 1e6, 1.0, 1e-6;
  Eigen::MatrixXd qg = d * q * d;
  CHECK(negative_count(qg) == 1);
}

TEST_CASE("SchurPencil invariants: graph Gram dominates the '+' Gram") {
  Rng rng(91);
  for (int trial = 0; trial < 25; ++trial) {
    GapPencilSpec spec;
    spec.dim_plus = 3 + trial % 4;
    spec.dim_minus = 2 + trial % 5;
    const SplitOperator op = random_gap_operator(rng, spec);
    const double a = gap_constant(op);
    const double e = a + 0.1 + 0.8 * rng.uniform();
    const SchurPencil sp = schur_pencil(op, e);
    // g - s_pp is PSD (it equals Y^T s_mm Y).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sp.g_matrix - op.s_pp);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    // The shifted "-" block is positive definite above a.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(
        (e * op.s_mm - op.a_mm).selfadjointView<Eigen::Lower>());
    CHECK(em.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("clean random pencils match the dense oracle on every level") {
  Rng rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    GapPencilSpec spec;
    spec.dim_plus = 2 + rng.uniform_int(0, 5);
    spec.dim_minus = 2 + rng.uniform_int(0, 5);
    spec.coupling = 0.05 + 0.35 * rng.uniform();
    const SplitOperator op = random_gap_operator(rng, spec);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        op.full_a(), op.full_s(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    for (int k = 1; k <= spec.dim_plus; ++k) {
      const MinMaxSolution sol = solve_level(op, k, 1e-11);
      CHECK(std::abs(sol.lambda - es.eigenvalues()[spec.dim_minus + k - 1]) < 1e-9);
    }
  }
}

TEST_CASE("constructed violators fail the hypothesis at every probe") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const SplitOperator op = random_iii_violator(rng, 2 + trial % 4, 2 + trial % 3);
    const double a = gap_constant(op);
    for (double step : {1e-9, 1e-5, 1e-2, 0.3}) {
      CHECK_FALSE(check_hypotheses(op, a + step * (1.0 + std::abs(a))).pass());
    }
    CHECK_THROWS_AS((void)solve_level(op, 1, 1e-10), BracketError);
  }
}

TEST_CASE("oracle fuzz summary agrees with itself") {
  FuzzOptions opts;
  opts.instances = 80;
  opts.seed = 321;
  const FuzzOutcome out = oracle_fuzz(opts);
  CHECK(out.pass);
  CHECK(out.instances == 80);
  CHECK(out.counterexamples == 8);
  CHECK(out.rejected == 8);
  CHECK(out.oracle_checked == 72);
  CHECK(out.agreements == 72);
  CHECK(out.max_deviation < 1e-9);
}

TEST_CASE("property suite holds on random gap operators") {
  Rng rng(77);
  GapPencilSpec spec;
  spec.dim_plus = 5;
  spec.dim_minus = 6;
  const SplitOperator op = random_gap_operator(rng, spec);
  MonotonicityOptions mo;
  mo.samples = 300;
  const VerificationReport rep = minmax_property_suite(op, mo);
  for (const CheckRecord& c : rep.checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
  CHECK(rep.all_pass());
}

TEST_CASE("dense oracle windows the spectrum") {
  const SplitOperator op = two_by_two();
  const auto in_gap = dense_oracle(op, -1.0, 2.0);
  REQUIRE(in_gap.size() == 1);
  CHECK(in_gap[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(dense_oracle(op, -3.0, 3.0).size() == 2);
  CHECK_THROWS_AS((void)dense_oracle(op, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("from_full rejects cross Gram blocks") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(3, 3);
  s(0, 2) = s(2, 0) = 0.5;  // couples "+" and "-" in the Gram
  CHECK_THROWS_AS((void)SplitOperator::from_full(a, s, 1), std::invalid_argument);
}

TEST_CASE("generic family interface matches the operator path") {
  const SplitOperator op = two_by_two();
  const MatrixSchurFamily fam(op);
  CHECK(fam.dim() == 1);
  CHECK(fam.gap_constant() == doctest::Approx(-1.0));
  SolveOptions opts;
  opts.tol = 1e-12;
  const MinMaxSolution a = solve_level(fam, 1, opts);
  const MinMaxSolution b = solve_level(op, 1, opts);
  CHECK(a.lambda == doctest::Approx(b.lambda).epsilon(1e-12));
  CHECK(check_hypotheses(fam, 0.0).pass());
}
