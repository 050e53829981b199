#include "gapmm/minmax.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace gapmm {

namespace {

constexpr double kLowerProbeSteps[] = {1e-8, 1e-10, 1e-12, 1e-6, 1e-4};

Eigen::LLT<Eigen::MatrixXd> shifted_minus_block(const SplitOperator& op, double E) {
  Eigen::MatrixXd m = E * op.s_mm - op.a_mm;
  Eigen::LLT<Eigen::MatrixXd> llt(std::move(m));
  if (llt.info() != Eigen::Success) {
    throw HypothesisError("shifted '-' block is not positive definite: energy is not above the gap constant");
  }
  return llt;
}

Eigen::VectorXd pencil_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      a, b, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw std::runtime_error("generalized eigensolver failed");
  return es.eigenvalues();
}

double residual_norm(const SplitOperator& op, double lambda, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd s = op.full_s();
  const Eigen::VectorXd r = op.full_a() * x - lambda * (s * x);
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  const double dual = llt.matrixL().solve(r).norm();
  const double xnorm = std::sqrt(x.dot(s * x));
  return dual / xnorm;
}

}  // namespace

double gap_constant(const SplitOperator& op) {
  return pencil_eigenvalues(op.a_mm, op.s_mm).maxCoeff();
}

Eigen::VectorXd maximizer_L(const SplitOperator& op, double E, const Eigen::VectorXd& x_plus) {
  if (x_plus.size() != op.dim_plus()) {
    throw std::invalid_argument("maximizer_L: vector size does not match the '+' block");
  }
  return shifted_minus_block(op, E).solve(op.a_pm.transpose() * x_plus);
}

double phi_form(const SplitOperator& op, double E, const Eigen::VectorXd& x_plus,
                const Eigen::VectorXd& y_minus) {
  const double quad = x_plus.dot(op.a_pp * x_plus) + 2.0 * x_plus.dot(op.a_pm * y_minus) +
                      y_minus.dot(op.a_mm * y_minus);
  const double norm2 = x_plus.dot(op.s_pp * x_plus) + y_minus.dot(op.s_mm * y_minus);
  return quad - E * norm2;
}

SchurPencil schur_pencil(const SplitOperator& op, double E) {
  const auto llt = shifted_minus_block(op, E);
  const Eigen::MatrixXd y = llt.solve(op.a_pm.transpose());
  SchurPencil sp;
  sp.energy = E;
  sp.q_matrix = op.a_pp - E * op.s_pp + op.a_pm * y;
  sp.g_matrix = op.s_pp + y.transpose() * op.s_mm * y;
  sp.q_matrix = (0.5 * (sp.q_matrix + sp.q_matrix.transpose())).eval();
  sp.g_matrix = (0.5 * (sp.g_matrix + sp.g_matrix.transpose())).eval();
  return sp;
}

MatrixSchurFamily::MatrixSchurFamily(SplitOperator op)
    : op_(std::move(op)), a_(gapmm::gap_constant(op_)) {}

double MatrixSchurFamily::level_search_start() const { return full_pencil_max(op_) + 1.0; }

SchurPencil MatrixSchurFamily::pencil(double energy) const { return schur_pencil(op_, energy); }

Eigen::VectorXd ell_all(const SchurFamily& fam, double energy) {
  const SchurPencil sp = fam.pencil(energy);
  return pencil_eigenvalues(sp.q_matrix, sp.g_matrix);
}

double ell_k(const SchurFamily& fam, double energy, int k) {
  if (k < 1 || k > fam.dim()) throw std::invalid_argument("ell_k: level index out of range");
  return ell_all(fam, energy)[k - 1];
}

Eigen::VectorXd ell_all(const SplitOperator& op, double E) {
  const SchurPencil sp = schur_pencil(op, E);
  return pencil_eigenvalues(sp.q_matrix, sp.g_matrix);
}

double ell_k(const SplitOperator& op, double E, int k) {
  if (k < 1 || k > op.dim_plus()) throw std::invalid_argument("ell_k: level index out of range");
  return ell_all(op, E)[k - 1];
}

int negative_count(const Eigen::MatrixXd& q, double threshold) {
  const int n = static_cast<int>(q.rows());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = 1.0 / std::sqrt(std::max(q.row(i).cwiseAbs().maxCoeff(), 1e-300));
  }
  const Eigen::MatrixXd qs = d.asDiagonal() * q * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qs, Eigen::EigenvaluesOnly);
  return static_cast<int>((es.eigenvalues().array() < -threshold).count());
}

HypothesisReport check_hypotheses(const SchurFamily& fam, double probe_energy) {
  HypothesisReport rep;
  rep.a_value = fam.gap_constant();
  rep.probe_energy = probe_energy;
  rep.condition_ii = std::isfinite(rep.a_value);
  if (!(probe_energy > rep.a_value)) {
    throw std::invalid_argument("check_hypotheses: probe energy must exceed the gap constant");
  }
  const SchurPencil sp = fam.pencil(probe_energy);
  rep.q_min_eigenvalue = pencil_eigenvalues(sp.q_matrix, sp.g_matrix).minCoeff();
  // Sign decided on the equilibrated matrix so strong grading cannot mask a
  // genuinely negative direction (or fake one).
  rep.condition_iii = negative_count(sp.q_matrix, 1e-10) == 0;
  return rep;
}

HypothesisReport check_hypotheses(const SplitOperator& op, double probe_energy) {
  return check_hypotheses(MatrixSchurFamily(op), probe_energy);
}

HypothesisReport check_hypotheses_retry(const SchurFamily& fam, double probe_energy,
                                        int max_retries) {
  HypothesisReport rep = check_hypotheses(fam, probe_energy);
  for (int j = 0; j < max_retries && !rep.pass(); ++j) {
    probe_energy = rep.a_value + 0.25 * (probe_energy - rep.a_value);
    try {
      rep = check_hypotheses(fam, probe_energy);
    } catch (const HypothesisError&) {
      break;
    }
  }
  return rep;
}

HypothesisReport check_hypotheses_retry(const SplitOperator& op, double probe_energy,
                                        int max_retries) {
  return check_hypotheses_retry(MatrixSchurFamily(op), probe_energy, max_retries);
}

double full_pencil_max(const SplitOperator& op) {
  return pencil_eigenvalues(op.full_a(), op.full_s()).maxCoeff();
}

namespace {

struct LevelEval {
  double value = 0.0;   // ell_k at the probe
  bool positive = false;  // sign from inertia
  bool have_value = false;
};

LevelEval eval_level(const SchurFamily& fam, double E, int k, bool want_value) {
  const SchurPencil sp = fam.pencil(E);
  LevelEval ev;
  ev.positive = negative_count(sp.q_matrix) < k;
  if (want_value) {
    ev.value = pencil_eigenvalues(sp.q_matrix, sp.g_matrix)[k - 1];
    ev.have_value = true;
  }
  return ev;
}

}  // namespace

MinMaxSolution solve_level(const SplitOperator& op, int k, double tol) {
  SolveOptions opts;
  opts.tol = tol;
  return solve_level(op, k, opts);
}

MinMaxSolution solve_level(const SplitOperator& op, int k, const SolveOptions& opts) {
  const MatrixSchurFamily fam(op);
  MinMaxSolution sol = solve_level(fam, k, opts);
  const Eigen::VectorXd x = reconstruct_eigenvector(op, sol);
  sol.residual = residual_norm(op, sol.lambda, x);
  sol.residual_ok = sol.residual <= opts.residual_tol;
  return sol;
}

MinMaxSolution solve_level(const SchurFamily& fam, int k, const SolveOptions& opts) {
  if (k < 1 || k > fam.dim()) {
    throw std::invalid_argument("solve_level: level index must be in [1, dim_plus]");
  }
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_level: tolerance must be positive");
  const double a = fam.gap_constant();

  MinMaxSolution sol;
  sol.k = k;
  int evals = 0;

  // Lower bracket end just above the gap constant. A nonpositive sign there
  // means the level does not lie above the gap constant; a Cholesky failure
  // means the probe was numerically indistinguishable from it.
  double lo = 0.0;
  {
    bool found = false, saw_negative = false;
    for (double step : kLowerProbeSteps) {
      const double cand = a + step * (1.0 + std::abs(a));
      if (saw_negative && step > 1e-8) break;
      try {
        ++evals;
        if (eval_level(fam, cand, k, false).positive) {
          lo = cand;
          found = true;
          break;
        }
        saw_negative = true;
      } catch (const HypothesisError&) {
        continue;
      }
    }
    if (!found) {
      throw BracketError(
          "solve_level: no positive sign just above the gap constant "
          "(positivity hypothesis fails or the level is not in the gap)");
    }
  }

  double hi = fam.level_search_start();
  {
    int doublings = 0;
    ++evals;
    while (eval_level(fam, hi, k, false).positive) {
      if (++doublings > 60) throw BracketError("solve_level: no sign change below the upper bracket");
      hi = 2.0 * std::abs(hi) + 1.0;
      ++evals;
    }
  }

  // Bisection on the sign down to ten tolerances, then secant refinement.
  while (hi - lo > 10.0 * opts.tol) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    ++evals;
    if (eval_level(fam, mid, k, false).positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  double lambda = 0.5 * (lo + hi);
  bool converged_on_value = false;
  {
    double flo = 0.0, fhi = 0.0;
    bool have_ends = false;
    try {
      flo = ell_k(fam, lo, k);
      fhi = ell_k(fam, hi, k);
      have_ends = flo > 0.0 && fhi < 0.0;
      evals += 2;
    } catch (const HypothesisError&) {
      have_ends = false;
    }
    for (int step = 0; step < opts.max_secant && have_ends; ++step) {
      double x = (lo * fhi - hi * flo) / (fhi - flo);
      const double margin = 0.05 * (hi - lo);
      x = std::clamp(x, lo + margin, hi - margin);
      LevelEval ev;
      try {
        ++evals;
        ev = eval_level(fam, x, k, true);
      } catch (const HypothesisError&) {
        break;
      }
      if (ev.positive) {
        lo = x;
        flo = ev.value;
      } else {
        hi = x;
        fhi = ev.value;
      }
      if (std::abs(ev.value) < opts.tol * (1.0 + std::abs(x))) {
        lambda = x;
        converged_on_value = true;
        break;
      }
      if (!(flo > 0.0 && fhi < 0.0)) break;
    }
  }

  while (hi - lo > opts.tol) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    ++evals;
    if (eval_level(fam, mid, k, false).positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!converged_on_value || lambda < lo || lambda > hi) lambda = 0.5 * (lo + hi);

  sol.lambda = lambda;
  sol.bracket_lo = lo;
  sol.bracket_hi = hi;
  sol.iterations = evals;

  try {
    const SchurPencil sp = fam.pencil(lambda);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        sp.q_matrix, sp.g_matrix, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() == Eigen::Success) {
      int idx = 0;
      es.eigenvalues().cwiseAbs().minCoeff(&idx);
      const Eigen::VectorXd u = es.eigenvectors().col(idx);
      Eigen::LLT<Eigen::MatrixXd> g_llt(sp.g_matrix);
      if (g_llt.info() == Eigen::Success) {
        const double unorm = std::sqrt(u.dot(sp.g_matrix * u));
        sol.residual = g_llt.matrixL().solve(sp.q_matrix * u).norm() / unorm;
      }
      sol.multiplicity = std::max<int>(
          1, (es.eigenvalues().cwiseAbs().array() <= 10.0 * opts.tol).count());
    }
  } catch (const HypothesisError&) {
    sol.multiplicity = 1;
  }
  sol.residual_ok = sol.residual <= opts.residual_tol;
  return sol;
}

double lambda_of_vector(const SplitOperator& op, const Eigen::VectorXd& x_plus, double tol)
{
  if (x_plus.size() != op.dim_plus()) {
    throw std::invalid_argument("lambda_of_vector: vector size does not match the '+' block");
  }
  const double xs = x_plus.dot(op.s_pp * x_plus);
  if (!(xs > 0.0)) throw std::invalid_argument("lambda_of_vector: zero vector");
  if (!(tol > 0.0)) throw std::invalid_argument("lambda_of_vector: tolerance must be positive");

  const double a = gap_constant(op);
  const auto q_and_graph = [&](double E) {
    const auto llt = shifted_minus_block(op, E);
    const Eigen::VectorXd w = op.a_pm.transpose() * x_plus;
    const Eigen::VectorXd y = llt.solve(w);
    const double q = x_plus.dot(op.a_pp * x_plus) - E * xs + w.dot(y);
    const double g = xs + y.dot(op.s_mm * y);
    return std::make_pair(q, g);
  };

  double lo = 0.0;
  {
    bool found = false, saw_negative = false;
    for (double step : kLowerProbeSteps) {
      const double cand = a + step * (1.0 + std::abs(a));
      if (saw_negative && step > 1e-8) break;
      try {
        if (q_and_graph(cand).first > 0.0) {
          lo = cand;
          found = true;
          break;
        }
        saw_negative = true;
      } catch (const HypothesisError&) {
        continue;
      }
    }
    if (!found) {
      throw BracketError("lambda_of_vector: form not positive just above the gap constant");
    }
  }

  double hi = full_pencil_max(op) + 1.0;
  {
    int doublings = 0;
    while (q_and_graph(hi).first > 0.0) {
      if (++doublings > 60) throw BracketError("lambda_of_vector: no sign change below the upper bracket");
      hi = 2.0 * std::abs(hi) + 1.0;
    }
  }

  while (hi - lo > 10.0 * tol) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (q_and_graph(mid).first > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  double root = 0.5 * (lo + hi);
  bool converged_on_value = false;
  {
    double flo = q_and_graph(lo).first;
    double fhi = q_and_graph(hi).first;
    for (int step = 0; step < 5 && flo > 0.0 && fhi < 0.0; ++step) {
      double x = (lo * fhi - hi * flo) / (fhi - flo);
      const double margin = 0.05 * (hi - lo);
      x = std::clamp(x, lo + margin, hi - margin);
      const auto [fx, gx] = q_and_graph(x);
      if (fx > 0.0) {
        lo = x;
        flo = fx;
      } else {
        hi = x;
        fhi = fx;
      }
      // dQ/dE equals minus the graph-norm square, so |Q|/g bounds the
      // distance to the root.
      if (std::abs(fx) < tol * gx) {
        root = x;
        converged_on_value = true;
        break;
      }
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (q_and_graph(mid).first > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!converged_on_value || root < lo || root > hi) root = 0.5 * (lo + hi);
  return root;
}

Eigen::VectorXd reconstruct_eigenvector(const SplitOperator& op, const MinMaxSolution& sol) {
  const SchurPencil sp = schur_pencil(op, sol.lambda);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sp.q_matrix, sp.g_matrix,
                                                               Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw std::runtime_error("reconstruct_eigenvector: eigensolver failed");
  int idx = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&idx);
  const Eigen::VectorXd x_plus = es.eigenvectors().col(idx);
  const Eigen::VectorXd y_minus = maximizer_L(op, sol.lambda, x_plus);
  Eigen::VectorXd x(op.dim());
  x << x_plus, y_minus;
  const double nrm = std::sqrt(x.dot(op.full_s() * x));
  if (nrm > 0.0) x /= nrm;
  return x;
}

std::vector<double> dense_oracle(const SplitOperator& op, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("dense_oracle: empty interval");
  const Eigen::VectorXd evs = pencil_eigenvalues(op.full_a(), op.full_s());
  std::vector<double> out;
  for (int i = 0; i < evs.size(); ++i) {
    if (evs[i] > lo && evs[i] < hi) out.push_back(evs[i]);
  }
  return out;
}

}  // namespace gapmm
