#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "gapmm/dirac_radial.hpp"
#include "gapmm/matrix_io.hpp"
#include "gapmm/minmax.hpp"
#include "gapmm/potentials.hpp"
#include "gapmm/properties.hpp"
#include "gapmm/random_pencils.hpp"

namespace py = pybind11;
using namespace gapmm;

namespace {

SplitOperator make_split(const Eigen::MatrixXd& a, int dim_plus, const py::object& s) {
  if (s.is_none()) return SplitOperator::from_full(a, dim_plus);
  return SplitOperator::from_full(a, s.cast<Eigen::MatrixXd>(), dim_plus);
}

py::dict hypothesis_dict(const HypothesisReport& rep) {
  py::dict d;
  d["gap_constant"] = rep.a_value;
  d["probe_energy"] = rep.probe_energy;
  d["q_min_eigenvalue"] = rep.q_min_eigenvalue;
  d["pass"] = rep.pass();
  return d;
}

py::dict solution_dict(const MinMaxSolution& sol) {
  py::dict d;
  d["k"] = sol.k;
  d["lambda"] = sol.lambda;
  d["residual"] = sol.residual;
  d["iterations"] = sol.iterations;
  d["bracket"] = py::make_tuple(sol.bracket_lo, sol.bracket_hi);
  d["multiplicity"] = sol.multiplicity;
  return d;
}

double pick_r_max(double r_max, double nu, int k_max) {
  if (r_max > 0.0) return r_max;
  return (k_max >= 2 ? 150.0 : 45.0) / std::max(nu, 0.15);
}

py::dict solve_channel_py(double nu, int kappa, double epsilon, double mass, int k_max,
                          double r_max, int intervals, double stretch, int order,
                          const std::string& splitting, double tol, double edge_margin) {
  RadialGrid grid;
  grid.r_max = pick_r_max(r_max, nu, k_max);
  grid.n_intervals = intervals;
  grid.stretch = stretch;
  auto basis = std::make_shared<SplineBasis>(grid, order);
  const PotentialSpec pot =
      epsilon > 0.0 ? PotentialSpec::regularized_coulomb(nu, epsilon) : PotentialSpec::coulomb(nu);
  const RadialChannel ch = assemble_channel(basis, pot, kappa, mass);

  ChannelOptions opts;
  if (splitting == "talman") {
    opts.splitting = Splitting::kTalman;
  } else if (splitting == "free-energy") {
    opts.splitting = Splitting::kFreeEnergy;
  } else {
    throw std::invalid_argument("splitting must be 'talman' or 'free-energy'");
  }
  opts.k_max = k_max;
  opts.solve.tol = tol;
  opts.edge_margin = edge_margin;
  const ChannelSolution cs = channel_spectrum(ch, opts);

  py::dict d;
  d["splitting"] = splitting_name(opts.splitting);
  d["r_max"] = grid.r_max;
  d["hypothesis"] = hypothesis_dict(cs.hypothesis);
  d["hypotheses_ok"] = cs.hypotheses_ok;
  py::list levels;
  for (std::size_t i = 0; i < cs.levels.size(); ++i) {
    py::dict lvl = solution_dict(cs.levels[i]);
    lvl["in_gap"] = static_cast<bool>(cs.in_gap[i]);
    levels.append(lvl);
  }
  d["levels"] = levels;
  return d;
}

py::dict fuzz_py(int instances, int dim, unsigned long long seed, double match_tol) {
  FuzzOptions opts;
  opts.instances = instances;
  opts.dim = dim;
  opts.seed = seed;
  opts.match_tol = match_tol;
  const FuzzOutcome out = oracle_fuzz(opts);
  py::dict d;
  d["pass"] = out.pass;
  d["instances"] = out.instances;
  d["oracle_checked"] = out.oracle_checked;
  d["agreements"] = out.agreements;
  d["counterexamples"] = out.counterexamples;
  d["rejected"] = out.rejected;
  d["max_deviation"] = out.max_deviation;
  d["failure_note"] = out.failure_note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "gap eigenvalues of self-adjoint operators via the Schur-complement min-max";

  py::register_exception<HypothesisError>(m, "HypothesisError");
  py::register_exception<BracketError>(m, "BracketError");

  m.def("gap_constant",
        [](const Eigen::MatrixXd& a, int dim_plus, const py::object& s) {
          return gap_constant(make_split(a, dim_plus, s));
        },
        py::arg("a"), py::arg("dim_plus"), py::arg("s") = py::none(),
        "largest eigenvalue of the '-' block pencil: the reference the levels must stay above");

  m.def("check_hypotheses",
        [](const Eigen::MatrixXd& a, int dim_plus, const py::object& s, const py::object& energy) {
          const SplitOperator op = make_split(a, dim_plus, s);
          const double aa = gap_constant(op);
          const double probe =
              energy.is_none() ? aa + 0.01 * (1.0 + std::abs(aa)) : energy.cast<double>();
          return hypothesis_dict(check_hypotheses_retry(op, probe));
        },
        py::arg("a"), py::arg("dim_plus"), py::arg("s") = py::none(),
        py::arg("energy") = py::none(),
        "positivity of the Schur form at (or retried above) the probe energy");

  m.def("solve_level",
        [](const Eigen::MatrixXd& a, int dim_plus, int k, const py::object& s, double tol) {
          const SplitOperator op = make_split(a, dim_plus, s);
          const MinMaxSolution sol = solve_level(op, k, tol);
          py::dict d = solution_dict(sol);
          d["eigenvector"] = reconstruct_eigenvector(op, sol);
          return d;
        },
        py::arg("a"), py::arg("dim_plus"), py::arg("k") = 1, py::arg("s") = py::none(),
        py::arg("tol") = 1e-10, "k-th min-max level of the split pencil and its eigenvector");

  m.def("dense_oracle",
        [](const Eigen::MatrixXd& a, int dim_plus, double lo, double hi, const py::object& s) {
          return dense_oracle(make_split(a, dim_plus, s), lo, hi);
        },
        py::arg("a"), py::arg("dim_plus"), py::arg("lo"), py::arg("hi"),
        py::arg("s") = py::none(), "dense pencil eigenvalues inside (lo, hi), for cross-checks");

  m.def("analytic_energy", &analytic_dirac_coulomb, py::arg("nu"), py::arg("kappa"),
        py::arg("n_radial"), "closed-form point-Coulomb bound-state energy at unit mass");

  m.def("solve_channel", &solve_channel_py, py::arg("nu"), py::arg("kappa") = -1,
        py::arg("epsilon") = 0.0, py::arg("mass") = 1.0, py::arg("k_max") = 1,
        py::arg("r_max") = 0.0, py::arg("intervals") = 96, py::arg("stretch") = 1.22,
        py::arg("order") = 7, py::arg("splitting") = "talman", py::arg("tol") = 1e-10,
        py::arg("edge_margin") = 1e-3,
        "gap levels of a radial Coulomb channel in a B-spline box basis");

  m.def("oracle_fuzz", &fuzz_py, py::arg("instances") = 100, py::arg("dim") = 0,
        py::arg("seed") = 7, py::arg("match_tol") = 1e-9,
        "random split pencils solved level-by-level against the dense eigensolver");

  m.def("load_split_operator",
        [](const std::string& path) {
          const SplitOperator op = load_split_operator(path);
          return py::make_tuple(op.full_a(), op.full_s(), op.dim_plus());
        },
        py::arg("path"), "read a split-operator text file: returns (A, S, dim_plus)");

  m.def("save_split_operator",
        [](const std::string& path, const Eigen::MatrixXd& a, int dim_plus, const py::object& s) {
          save_split_operator(path, make_split(a, dim_plus, s));
        },
        py::arg("path"), py::arg("a"), py::arg("dim_plus"), py::arg("s") = py::none(),
        "write a split-operator text file");
}
