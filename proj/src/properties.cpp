#include "gapmm/properties.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace gapmm {

namespace {

struct FormPair {
  double q = 0.0;  // Schur form value
  double g = 0.0;  // squared graph norm
};

FormPair form_pair(const SplitOperator& op, double energy, const Eigen::VectorXd& x) {
  const Eigen::VectorXd w = op.a_pm.transpose() * x;
  const Eigen::VectorXd y = maximizer_L(op, energy, x);
  FormPair fp;
  fp.q = x.dot(op.a_pp * x) - energy * x.dot(op.s_pp * x) + w.dot(y);
  fp.g = x.dot(op.s_pp * x) + y.dot(op.s_mm * y);
  return fp;
}

bool leq(double lhs, double rhs, double slack, double& worst) {
  const double scale = std::abs(lhs) + std::abs(rhs);
  const double short_by = lhs - rhs;  // positive when violated
  worst = std::max(worst, short_by / (scale > 0.0 ? scale : 1.0));
  return short_by <= slack * (1.0 + scale);
}

}  // namespace

VerificationReport minmax_property_suite(const SplitOperator& op,
                                         const MonotonicityOptions& opts) {
  VerificationReport rep;
  const double a = gap_constant(op);
  const double top = full_pencil_max(op) + 1.0;
  const double span = std::max(1.0, top - a);
  Rng rng(opts.seed);

  bool norm_ok = true, chain_ok = true, ratio_ok = true;
  bool mean_lower_ok = true, mean_upper_ok = true;
  bool attained_ok = true, sup_ok = true;
  double worst = 0.0;

  for (int s = 0; s < opts.samples; ++s) {
    const double e1 = a + span * std::pow(rng.uniform(0.02, 1.0), 2.0);
    const double e2 = e1 + span * rng.uniform(0.05, 1.0);
    Eigen::VectorXd x(op.dim_plus());
    for (int i = 0; i < x.size(); ++i) x[i] = rng.normal();

    const FormPair lo = form_pair(op, e1, x);
    const FormPair hi = form_pair(op, e2, x);
    const double xs = x.dot(op.s_pp * x);

    norm_ok = leq(xs, hi.g, opts.slack, worst) && norm_ok;
    chain_ok = leq(hi.g, lo.g, opts.slack, worst) && chain_ok;
    const double ratio = (e2 - a) / (e1 - a);
    ratio_ok = leq(lo.g, ratio * ratio * hi.g, opts.slack, worst) && ratio_ok;

    const double diff = lo.q - hi.q;
    mean_lower_ok = leq((e2 - e1) * hi.g, diff, opts.slack, worst) && mean_lower_ok;
    mean_upper_ok = leq(diff, (e2 - e1) * lo.g, opts.slack, worst) && mean_upper_ok;

    // The form value is a supremum over the "-" block: attained at the
    // explicit maximizer, not exceeded nearby or along random directions.
    const Eigen::VectorXd y_star = maximizer_L(op, e1, x);
    const double at_max = phi_form(op, e1, x, y_star);
    const double scale_q = std::abs(lo.q) + std::abs(at_max);
    if (std::abs(at_max - lo.q) > opts.slack * (1.0 + scale_q)) attained_ok = false;
    for (int d = 0; d < opts.sup_directions; ++d) {
      Eigen::VectorXd y = y_star;
      for (int i = 0; i < y.size(); ++i) y[i] += rng.uniform(0.1, 1.0) * rng.normal();
      sup_ok = leq(phi_form(op, e1, x, y), lo.q, opts.slack, worst) && sup_ok;
    }
  }

  rep.add("graph_norm_lower", norm_ok, worst, "||x||_S <= n_{E'}");
  rep.add("graph_norm_monotone", chain_ok, worst, "n_{E'} <= n_E");
  rep.add("graph_norm_ratio", ratio_ok, worst, "n_E <= (E'-a)/(E-a) n_{E'}");
  rep.add("mean_value_lower", mean_lower_ok, worst, "(E'-E) n_{E'}^2 <= Q_E - Q_{E'}");
  rep.add("mean_value_upper", mean_upper_ok, worst, "Q_E - Q_{E'} <= (E'-E) n_E^2");
  rep.add("sup_attained", attained_ok, worst, "Schur form equals value at the maximizer");
  rep.add("sup_not_exceeded", sup_ok, worst, "no random '-' direction beats the maximizer");
  return rep;
}

FuzzOutcome oracle_fuzz(const FuzzOptions& opts) {
  Rng rng(opts.seed);
  FuzzOutcome out;
  out.instances = opts.instances;
  out.pass = true;

  for (int i = 0; i < opts.instances && out.pass; ++i) {
    const int total = opts.dim > 0 ? opts.dim : rng.uniform_int(4, 40);
    const int dp = rng.uniform_int(2, total - 2);
    const int dm = total - dp;
    const bool violator =
        opts.counterexample_every > 0 && (i % opts.counterexample_every) == opts.counterexample_every - 1;

    if (violator) {
      ++out.counterexamples;
      const SplitOperator op = random_iii_violator(rng, dp, dm);
      const double a = gap_constant(op);
      const HypothesisReport rep = check_hypotheses(op, a + 0.3 * (1.0 + std::abs(a)));
      bool refused = false;
      try {
        solve_level(op, 1, 1e-10);
      } catch (const BracketError&) {
        refused = true;
      }
      if (!rep.pass() && refused) {
        ++out.rejected;
      } else {
        out.pass = false;
        out.failure_note = "counterexample accepted at instance " + std::to_string(i);
        out.failing = op;
      }
      continue;
    }

    GapPencilSpec spec;
    spec.dim_plus = dp;
    spec.dim_minus = dm;
    spec.band_bottom = rng.uniform(-6.0, -2.0);
    spec.band_spread = rng.uniform(1.0, 4.0);
    spec.gap_width = rng.uniform(0.5, 2.0);
    spec.coupling = rng.uniform(0.05, 0.45);
    const SplitOperator op = random_gap_operator(rng, spec);

    ++out.oracle_checked;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        op.full_a(), op.full_s(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    const Eigen::VectorXd dense = es.eigenvalues();  // ascending

    bool all_match = true;
    double local_dev = 0.0;
    for (int k = 1; k <= dp; ++k) {
      MinMaxSolution sol;
      try {
        sol = solve_level(op, k, 1e-11);
      } catch (const std::exception&) {
        all_match = false;
        break;
      }
      // Exactly dim_minus pencil eigenvalues lie at or below the gap
      // constant, so level k is the (dim_minus + k)-th dense eigenvalue.
      const double expected = dense[dm + k - 1];
      local_dev = std::max(local_dev, std::abs(sol.lambda - expected));
    }
    out.max_deviation = std::max(out.max_deviation, local_dev);
    if (all_match && local_dev <= opts.match_tol) {
      ++out.agreements;
    } else {
      out.pass = false;
      out.failure_note = "oracle mismatch at instance " + std::to_string(i) +
                         " (deviation " + std::to_string(local_dev) + ")";
      out.failing = op;
    }
  }
  if (out.pass) {
    out.pass = out.agreements == out.oracle_checked && out.rejected == out.counterexamples;
  }
  return out;
}

}  // namespace gapmm
