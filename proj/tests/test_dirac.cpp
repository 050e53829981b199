#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include <Eigen/Dense>

#include "gapmm/dirac_radial.hpp"
#include "gapmm/minmax.hpp"
#include "gapmm/potentials.hpp"
#include "gapmm/random_pencils.hpp"

using namespace gapmm;

namespace {

std::shared_ptr<const SplineBasis> make_basis(double r_max, int n_intervals = 96,
                                              double stretch = 1.22, int order = 7) {
  RadialGrid grid;
  grid.r_max = r_max;
  grid.n_intervals = n_intervals;
  grid.stretch = stretch;
  return std::make_shared<SplineBasis>(grid, order);
}

RadialChannel coulomb_channel(double nu, int kappa, double r_max, int n_intervals = 96) {
  return assemble_channel(make_basis(r_max, n_intervals), PotentialSpec::coulomb(nu), kappa);
}

}  // namespace

TEST_CASE("bound-state energies of the point Coulomb channel") {
  CHECK(analytic_dirac_coulomb(0.5, -1, 0) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
  CHECK(analytic_dirac_coulomb(0.5, -1, 1) == doctest::Approx(0.9659258262890683).epsilon(1e-13));
  CHECK(analytic_dirac_coulomb(0.5, 1, 1) == doctest::Approx(0.9659258262890683).epsilon(1e-13));
  CHECK(analytic_dirac_coulomb(0.3, -2, 0) == doctest::Approx(std::sqrt(3.91) / 2.0).epsilon(1e-13));
  // n_r = 0 does not exist for kappa > 0, and the coupling must stay below |kappa|.
  CHECK_THROWS_AS((void)analytic_dirac_coulomb(0.5, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)analytic_dirac_coulomb(0.5, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)analytic_dirac_coulomb(1.2, -1, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)analytic_dirac_coulomb(0.5, -1, -1), std::invalid_argument);
}

TEST_CASE("assembled channel matrices carry the expected structure") {
  const RadialChannel ch = coulomb_channel(0.5, -1, 60.0, 48);
  const int n = ch.basis->size();
  CHECK(ch.overlap.rows() == n);
  CHECK((ch.overlap - ch.overlap.transpose()).norm() < 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ch.overlap);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  // Retained splines vanish at both endpoints, so int B_i B_j' is
  // antisymmetric and the full coupling block is d_kappa transposed.
  CHECK((ch.deriv + ch.deriv.transpose()).norm() < 1e-12);
  const SplitOperator op = talman_split(ch);
  CHECK((op.a_pm - ch.d_kappa().transpose()).norm() < 1e-12);
  CHECK((op.a_pp - op.a_mm - 2.0 * ch.mass * ch.overlap).norm() < 1e-12);
  CHECK((op.s_pp - ch.overlap).norm() == 0.0);
  CHECK((op.s_mm - ch.overlap).norm() == 0.0);

  // With nu = 0 the potential term vanishes identically.
  const RadialChannel free_ch = coulomb_channel(0.0, -1, 60.0, 48);
  CHECK(free_ch.v_overlap.norm() == 0.0);
}

TEST_CASE("free channel: explicit lower-component maximizer in closed form") {
  // With V = 0 the shifted '-' block is (m + E) S, so both the pencil
  // maximizer and the Gram projection of Df / (m - V + E) reduce to
  // S^{-1} d_kappa f / (m + E) and must coincide.
  const RadialChannel ch = coulomb_channel(0.0, -1, 40.0, 32);
  const SplitOperator op = talman_split(ch);
  Rng rng(11);
  Eigen::VectorXd f(op.dim_plus());
  for (int i = 0; i < f.size(); ++i) f[i] = rng.normal();
  const double e = 0.3;
  const Eigen::VectorXd y = maximizer_L(op, e, f);
  const Eigen::VectorXd chi = chi_from_phi(ch, f, e);
  CHECK((y - chi).norm() < 1e-10 * y.norm());
  const Eigen::VectorXd direct =
      ch.overlap.llt().solve(ch.d_kappa() * f) / (ch.mass + e);
  CHECK((y - direct).norm() < 1e-10 * y.norm());
}

TEST_CASE("free channel has no level inside the gap") {
  const RadialChannel ch = coulomb_channel(0.0, -1, 40.0, 32);
  ChannelOptions opts;
  const ChannelSolution sol = channel_spectrum(ch, opts);
  CHECK(sol.hypotheses_ok);
  REQUIRE(sol.levels.size() == 1);
  CHECK(sol.levels[0].lambda > ch.mass);
  CHECK_FALSE(sol.in_gap[0]);
}

TEST_CASE("Coulomb ground state at nu = 0.5 matches the closed form") {
  const RadialChannel ch = coulomb_channel(0.5, -1, 90.0);
  ChannelOptions opts;
  const ChannelSolution sol = channel_spectrum(ch, opts);
  REQUIRE(sol.hypotheses_ok);
  REQUIRE(sol.levels.size() == 1);
  const double exact = std::sqrt(3.0) / 2.0;
  CHECK(std::abs(sol.levels[0].lambda - exact) / exact < 1e-10);
  CHECK(sol.in_gap[0]);
  CHECK(sol.levels[0].residual_ok);
}

TEST_CASE("kappa = +1 level and the |kappa| degeneracy") {
  // The kappa > 0 tower starts at n_r = 1 and is degenerate with the
  // kappa < 0 second level.
  const RadialChannel plus = coulomb_channel(0.5, 1, 300.0);
  ChannelOptions opts;
  opts.k_max = 1;
  const ChannelSolution sp = channel_spectrum(plus, opts);
  REQUIRE(sp.hypotheses_ok);
  REQUIRE_FALSE(sp.levels.empty());
  const double exact = analytic_dirac_coulomb(0.5, 1, 1);
  CHECK(std::abs(sp.levels[0].lambda - exact) / exact < 1e-8);

  const RadialChannel minus = coulomb_channel(0.5, -1, 300.0);
  opts.k_max = 2;
  const ChannelSolution sm = channel_spectrum(minus, opts);
  REQUIRE(sm.levels.size() == 2);
  CHECK(std::abs(sm.levels[1].lambda - sp.levels[0].lambda) < 1e-8);
}

TEST_CASE("kappa = -2 tower against the closed form") {
  const RadialChannel ch = coulomb_channel(0.5, -2, 300.0);
  ChannelOptions opts;
  opts.k_max = 2;
  const ChannelSolution sol = channel_spectrum(ch, opts);
  REQUIRE(sol.levels.size() == 2);
  for (int k = 0; k < 2; ++k) {
    const double exact = analytic_dirac_coulomb(0.5, -2, k);
    CHECK(std::abs(sol.levels[k].lambda - exact) / exact < 1e-8);
  }
}

TEST_CASE("upper-component functional: value at the minimizer and upper-bound property") {
  const RadialChannel ch = coulomb_channel(0.5, -1, 90.0);
  const SplitOperator op = talman_split(ch);
  const MinMaxSolution sol = solve_level(op, 1, 1e-11);
  const Eigen::VectorXd v = reconstruct_eigenvector(op, sol);
  const Eigen::VectorXd f = v.head(op.dim_plus());

  const double t_root = talman_lambda_functional(ch, f);
  CHECK(std::abs(t_root - sol.lambda) < 1e-9);

  // Any other upper component gives a root at or above the first level.
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd g = f;
    for (int i = 0; i < g.size(); ++i) g[i] += 0.05 * rng.normal() * f.norm();
    CHECK(talman_lambda_functional(ch, g) >= sol.lambda - 1e-12);
  }
}

TEST_CASE("functional family and block pencil agree for kappa < 0") {
  const RadialChannel ch = coulomb_channel(0.5, -1, 90.0);
  const TalmanSchurFamily fam(ch);
  CHECK(fam.dim() == ch.basis->size());
  // In-box Coulomb: sup V over the nodes is -nu / r_quad_max.
  CHECK(fam.gap_constant() < -1.0);
  CHECK(fam.gap_constant() > -1.01);
  SolveOptions opts;
  const double lam_fun = solve_level(fam, 1, opts).lambda;
  const double lam_mat = solve_level(talman_split(ch), 1, opts).lambda;
  CHECK(std::abs(lam_fun - lam_mat) < 1e-9);
  CHECK_THROWS_AS((void)fam.pencil(fam.gap_constant() - 0.1), HypothesisError);
}

TEST_CASE("free-energy splitting reproduces the component-splitting level") {
  const RadialChannel ch = coulomb_channel(0.5, -1, 90.0);
  const FreeEnergySplit fes = free_energy_split(ch);
  CHECK(fes.near_zero_modes == 0);
  CHECK(fes.op.dim() == 2 * ch.basis->size());
  // Modes are S-orthonormal columns of the full two-component Gram.
  Eigen::MatrixXd s_full = Eigen::MatrixXd::Zero(fes.op.dim(), fes.op.dim());
  const int n = ch.basis->size();
  s_full.topLeftCorner(n, n) = ch.overlap;
  s_full.bottomRightCorner(n, n) = ch.overlap;
  const Eigen::MatrixXd gram = fes.modes.transpose() * s_full * fes.modes;
  CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm() < 1e-10);
  // "+" modes carry positive free energy, "-" modes negative.
  const int np = fes.op.dim_plus();
  CHECK(fes.free_energies.head(np).minCoeff() > 0.0);
  CHECK(fes.free_energies.tail(fes.op.dim() - np).maxCoeff() < 0.0);

  ChannelOptions topts;
  const double lam_t = channel_spectrum(ch, topts).levels[0].lambda;
  ChannelOptions fopts;
  fopts.splitting = Splitting::kFreeEnergy;
  const ChannelSolution fsol = channel_spectrum(ch, fopts);
  REQUIRE(fsol.hypotheses_ok);
  REQUIRE_FALSE(fsol.levels.empty());
  CHECK(std::abs(fsol.levels[0].lambda - lam_t) < 1e-8);
}

TEST_CASE("Gram projection recovers in-span functions") {
  const RadialChannel ch = coulomb_channel(0.3, -1, 40.0, 32);
  Rng rng(8);
  Eigen::VectorXd c(ch.basis->size());
  for (int i = 0; i < c.size(); ++i) c[i] = rng.normal();
  const auto f = [&](double r) { return ch.basis->eval(c, r); };
  const Eigen::VectorXd back = project_to_basis(ch, f);
  CHECK((back - c).norm() < 1e-10 * c.norm());
}
