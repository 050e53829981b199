#include "gapmm/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gapmm {

SweepPoint sweep_point(double nu, double epsilon, const ContinuationOptions& opts) {
  if (!opts.basis) throw std::invalid_argument("sweep_point: null basis");
  SweepPoint pt;
  pt.nu = nu;
  pt.epsilon = epsilon;

  const PotentialSpec v = epsilon > 0.0 ? PotentialSpec::regularized_coulomb(nu, epsilon)
                                        : PotentialSpec::coulomb(nu);
  const RadialChannel ch = assemble_channel(opts.basis, v, opts.kappa, opts.mass);

  ChannelOptions copts;
  copts.splitting = Splitting::kTalman;
  copts.k_max = 1;
  copts.solve = opts.solve;
  copts.edge_margin = opts.edge_margin;
  const ChannelSolution cs = channel_spectrum(ch, copts);

  pt.a_value = cs.hypothesis.a_value;
  pt.hypotheses_ok = cs.hypotheses_ok;
  if (!cs.levels.empty()) {
    pt.solved = true;
    pt.lambda1 = cs.levels[0].lambda;
    pt.residual = cs.levels[0].residual;
    pt.in_gap = cs.in_gap[0];
  }
  return pt;
}

NuSweepResult nu_sweep(const std::vector<double>& nu_values, double epsilon,
                       const ContinuationOptions& opts) {
  if (nu_values.empty()) throw std::invalid_argument("nu_sweep: empty grid");
  if (!(epsilon > 0.0)) throw std::invalid_argument("nu_sweep: epsilon must be positive");
  for (std::size_t i = 1; i < nu_values.size(); ++i) {
    if (!(nu_values[i] > nu_values[i - 1])) {
      throw std::invalid_argument("nu_sweep: grid must be strictly increasing");
    }
  }

  NuSweepResult out;
  out.points.reserve(nu_values.size());
  for (double nu : nu_values) out.points.push_back(sweep_point(nu, epsilon, opts));

  out.all_solved = std::all_of(out.points.begin(), out.points.end(),
                               [](const SweepPoint& p) { return p.solved; });
  out.monotone_ok = out.all_solved;
  out.lipschitz_ok = out.all_solved;
  for (std::size_t i = 1; i < out.points.size() && out.all_solved; ++i) {
    const double drop = out.points[i - 1].lambda1 - out.points[i].lambda1;
    const double dnu = out.points[i].nu - out.points[i - 1].nu;
    out.worst_increase = std::max(out.worst_increase, -drop);
    out.worst_excess_drop = std::max(out.worst_excess_drop, drop - dnu / epsilon);
    if (-drop > opts.slack) out.monotone_ok = false;
    if (drop > dnu / epsilon + opts.slack) out.lipschitz_ok = false;
  }
  return out;
}

namespace {

double neville_at_zero(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> p = ys;
  const int m = static_cast<int>(p.size());
  for (int level = 1; level < m; ++level) {
    for (int i = 0; i + level < m; ++i) {
      p[i] = (-xs[i + level] * p[i] + xs[i] * p[i + 1]) / (xs[i] - xs[i + level]);
    }
  }
  return p[0];
}

}  // namespace

RefineResult epsilon_refine(double nu, const std::vector<double>& eps_values,
                            const ContinuationOptions& opts) {
  if (eps_values.empty()) throw std::invalid_argument("epsilon_refine: empty list");
  for (std::size_t i = 0; i < eps_values.size(); ++i) {
    if (!(eps_values[i] > 0.0)) throw std::invalid_argument("epsilon_refine: epsilon must be positive");
    if (i > 0 && !(eps_values[i] < eps_values[i - 1])) {
      throw std::invalid_argument("epsilon_refine: list must be strictly decreasing");
    }
  }

  RefineResult out;
  out.points.reserve(eps_values.size());
  for (double eps : eps_values) out.points.push_back(sweep_point(nu, eps, opts));

  out.all_solved = std::all_of(out.points.begin(), out.points.end(),
                               [](const SweepPoint& p) { return p.solved; });
  out.monotone_ok = out.all_solved;
  for (std::size_t i = 1; i < out.points.size() && out.all_solved; ++i) {
    const double rise = out.points[i].lambda1 - out.points[i - 1].lambda1;
    out.worst_increase = std::max(out.worst_increase, rise);
    if (rise > opts.slack) out.monotone_ok = false;
  }

  if (out.all_solved) {
    const std::size_t tail = std::min<std::size_t>(3, out.points.size());
    std::vector<double> xs, ys;
    for (std::size_t i = out.points.size() - tail; i < out.points.size(); ++i) {
      xs.push_back(out.points[i].epsilon);
      ys.push_back(out.points[i].lambda1);
    }
    out.extrapolated = neville_at_zero(xs, ys);
  }
  out.analytic = analytic_dirac_coulomb(nu, opts.kappa, opts.kappa > 0 ? 1 : 0);
  out.extrapolation_gap = std::abs(out.extrapolated - out.analytic);
  return out;
}

}  // namespace gapmm
