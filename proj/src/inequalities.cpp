#include "gapmm/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "gapmm/dirac_radial.hpp"
#include "gapmm/quadrature.hpp"
#include "gapmm/radial_grid.hpp"
#include "gapmm/random_pencils.hpp"

namespace gapmm {

RadialFunction bump_function(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("bump_function: scale must be positive");
  RadialFunction f;
  f.value = [scale](double r) {
    const double t = r / scale;
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double u = 1.0 - t;
    return t * u * u * u;
  };
  f.deriv = [scale](double r) {
    const double t = r / scale;
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double u = 1.0 - t;
    return (u * u * u - 3.0 * t * u * u) / scale;
  };
  return f;
}

RadialFunction ground_state_function(double nu, int kappa) {
  if (kappa == 0) throw std::invalid_argument("ground_state_function: kappa must be nonzero");
  const double k2 = double(kappa) * kappa;
  if (!(nu > 0.0 && nu * nu < k2)) {
    throw std::invalid_argument("ground_state_function: need 0 < nu < |kappa|");
  }
  const double gamma = std::sqrt(k2 - nu * nu);
  RadialFunction f;
  f.value = [gamma, nu](double r) { return r > 0.0 ? std::pow(r, gamma) * std::exp(-nu * r) : 0.0; };
  f.deriv = [gamma, nu](double r) {
    return r > 0.0 ? (gamma / r - nu) * std::pow(r, gamma) * std::exp(-nu * r) : 0.0;
  };
  return f;
}

RadialFunction exp_linear_function() {
  RadialFunction f;
  f.value = [](double r) { return r * std::exp(-r); };
  f.deriv = [](double r) { return (1.0 - r) * std::exp(-r); };
  return f;
}

std::vector<TestFunction> make_family(const TestFamily& fam) {
  std::vector<TestFunction> out;
  switch (fam.kind) {
    case TestFamily::Kind::kBumps: {
      for (double s : fam.scales) {
        out.push_back({"bump(s=" + std::to_string(s) + ")", bump_function(s), s});
      }
      break;
    }
    case TestFamily::Kind::kGroundState: {
      out.push_back({"ground-state(nu=" + std::to_string(fam.nu) + ")",
                     ground_state_function(fam.nu, -1), std::max(80.0, 50.0 / fam.nu)});
      break;
    }
    case TestFamily::Kind::kRandomSpline: {
      auto basis = std::make_shared<SplineBasis>(RadialGrid::exponential(30.0, 40, 1.15), 6);
      Rng rng(fam.seed);
      for (int i = 0; i < fam.count; ++i) {
        Eigen::VectorXd c(basis->size());
        for (int j = 0; j < c.size(); ++j) c[j] = rng.normal();
        RadialFunction f;
        f.value = [basis, c](double r) { return basis->eval(c, r); };
        f.deriv = [basis, c](double r) { return basis->eval_deriv(c, r); };
        out.push_back({"spline#" + std::to_string(i), std::move(f), basis->grid().r_max});
      }
      break;
    }
  }
  return out;
}

double integrate_radial(const std::function<double(double)>& f, double r_max,
                        const QuadratureSpec& spec) {
  if (!(r_max > 0.0)) throw std::invalid_argument("integrate_radial: r_max must be positive");
  const RadialGrid grid = RadialGrid::exponential(r_max, spec.n_intervals, spec.stretch);
  const std::vector<double> breaks = grid.breakpoints();
  const GaussRule base = gauss_legendre(spec.gauss);
  const GaussRule boosted = gauss_legendre(spec.gauss + spec.first_interval_boost);
  double total = 0.0;
  for (std::size_t cell = 0; cell + 1 < breaks.size(); ++cell) {
    const GaussRule& rule = cell == 0 ? boosted : base;
    total += integrate(rule, breaks[cell], breaks[cell + 1], f);
  }
  return total;
}

namespace {

MarginRecord make_record(const std::string& tag, const std::string& id, double lhs, double rhs) {
  MarginRecord rec;
  rec.inequality = tag;
  rec.id = id;
  rec.lhs = lhs;
  rec.rhs = rhs;
  rec.margin = rhs - lhs;
  rec.scale = std::abs(lhs) + std::abs(rhs);
  return rec;
}

double d_kappa_of(const RadialFunction& f, int kappa, double r) {
  return f.deriv(r) + double(kappa) * f.value(r) / r;
}

}  // namespace

std::vector<MarginRecord> talman_inhomogeneous_margins(const TestFamily& fam, double nu,
                                                       int kappa) {
  if (!(nu >= 0.0 && nu <= 1.0)) {
    throw std::invalid_argument("talman_inhomogeneous_margins: need 0 <= nu <= 1");
  }
  const double e_ref = std::sqrt(std::max(0.0, 1.0 - nu * nu));
  std::vector<MarginRecord> out;
  for (const TestFunction& tf : make_family(fam)) {
    const auto& f = tf.f;
    const double norm2 = integrate_radial([&](double r) { return f.value(r) * f.value(r); },
                                          tf.r_support);
    const double coulomb = integrate_radial(
        [&](double r) { return f.value(r) * f.value(r) / r; }, tf.r_support);
    const double kinetic = integrate_radial(
        [&](double r) {
          const double df = d_kappa_of(f, kappa, r);
          return df * df / (nu / r + 1.0 + e_ref);
        },
        tf.r_support);
    out.push_back(make_record("talman-inhomogeneous", tf.id, nu * coulomb + e_ref * norm2,
                              kinetic + norm2));
  }
  return out;
}

std::vector<MarginRecord> talman_homogeneous_margins(const TestFamily& fam, int kappa) {
  std::vector<MarginRecord> out;
  for (const TestFunction& tf : make_family(fam)) {
    const auto& f = tf.f;
    const double coulomb = integrate_radial(
        [&](double r) { return f.value(r) * f.value(r) / r; }, tf.r_support);
    const double kinetic = integrate_radial(
        [&](double r) {
          const double df = d_kappa_of(f, kappa, r);
          return r * df * df;
        },
        tf.r_support);
    out.push_back(make_record("talman-homogeneous", tf.id, coulomb, kinetic));
  }
  return out;
}

std::vector<MarginRecord> classical_hardy_margins(const TestFamily& fam) {
  std::vector<MarginRecord> out;
  for (const TestFunction& tf : make_family(fam)) {
    const auto& f = tf.f;
    const double lhs = integrate_radial(
        [&](double r) { return f.value(r) * f.value(r) / (r * r); }, tf.r_support);
    const double rhs =
        4.0 * integrate_radial([&](double r) { return f.deriv(r) * f.deriv(r); }, tf.r_support);
    out.push_back(make_record("classical-hardy", tf.id, lhs, rhs));
  }
  return out;
}

BumpConvergence bump_margin_convergence(const std::vector<double>& scales, int kappa) {
  if (scales.empty()) throw std::invalid_argument("bump_margin_convergence: empty scale list");
  BumpConvergence out;
  out.scales = scales;

  TestFamily hom_fam;
  hom_fam.kind = TestFamily::Kind::kBumps;
  hom_fam.scales = {1.0};  // the homogeneous margin is scale-invariant
  out.homogeneous_margin = talman_homogeneous_margins(hom_fam, kappa)[0].margin;

  TestFamily fam;
  fam.kind = TestFamily::Kind::kBumps;
  fam.scales = scales;
  for (const MarginRecord& rec : talman_inhomogeneous_margins(fam, 1.0, kappa)) {
    out.inhomogeneous_margins.push_back(rec.margin);
  }
  out.relative_gap_at_smallest =
      std::abs(out.inhomogeneous_margins.back() - out.homogeneous_margin) /
      std::abs(out.homogeneous_margin);
  return out;
}

std::vector<MarginRecord> free_energy_margins(const FreeEnergyMarginOptions& opts) {
  if (!(opts.mass == 0.0 || opts.mass == 1.0)) {
    throw std::invalid_argument("free_energy_margins: mass must be 0 or 1");
  }
  const double nu = opts.mass == 0.0 ? 1.0 : opts.nu;
  if (!(nu >= 0.0 && nu <= 1.0)) {
    throw std::invalid_argument("free_energy_margins: need 0 <= nu <= 1");
  }
  const double e_ref = opts.mass == 0.0 ? 0.0 : std::sqrt(1.0 - nu * nu);

  auto basis = std::make_shared<SplineBasis>(
      RadialGrid::exponential(opts.r_max, opts.n_intervals, opts.stretch), opts.order);
  const RadialChannel ch =
      assemble_channel(basis, PotentialSpec::coulomb(0.0), opts.kappa, opts.mass);
  const FreeEnergySplit split = free_energy_split(ch);

  const int n = static_cast<int>(ch.inv_r.rows());
  const int dp = split.op.dim_plus();
  const int dm = split.op.dim_minus();

  Eigen::MatrixXd r_full = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  r_full.topLeftCorner(n, n) = ch.inv_r;
  r_full.bottomRightCorner(n, n) = ch.inv_r;
  const Eigen::MatrixXd r_modes = split.modes.transpose() * r_full * split.modes;

  const Eigen::VectorXd eps_plus = split.free_energies.head(dp);
  const Eigen::VectorXd eps_minus_abs = split.free_energies.tail(dm).cwiseAbs();
  const Eigen::MatrixXd r_pp = r_modes.topLeftCorner(dp, dp);
  const Eigen::MatrixXd r_mm = r_modes.bottomRightCorner(dm, dm);
  const Eigen::MatrixXd c_mp = r_modes.bottomLeftCorner(dm, dp);

  Eigen::MatrixXd den = nu * r_mm;
  den.diagonal() += eps_minus_abs;
  den.diagonal().array() += e_ref;
  den = (0.5 * (den + den.transpose())).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(den);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "free_energy_margins: compressed block not positive definite (assembly bug)");
  }

  const std::string tag =
      opts.mass == 0.0 ? "free-energy-zero-mass" : "free-energy-massive";
  Rng rng(opts.seed);
  std::vector<MarginRecord> out;
  out.reserve(opts.count);
  for (int i = 0; i < opts.count; ++i) {
    Eigen::VectorXd x(dp);
    for (int j = 0; j < dp; ++j) x[j] = rng.normal();
    const double lhs = nu * x.dot(r_pp * x) + e_ref * x.squaredNorm();
    const Eigen::VectorXd cx = c_mp * x;
    const double rhs = x.dot(eps_plus.asDiagonal() * x) + nu * nu * cx.dot(llt.solve(cx));
    out.push_back(make_record(tag, "v#" + std::to_string(i), lhs, rhs));
  }
  return out;
}

double min_margin(const std::vector<MarginRecord>& records) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : records) m = std::min(m, r.margin);
  return m;
}

double median_margin(std::vector<MarginRecord> records) {
  if (records.empty()) return 0.0;
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(r.margin);
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

double min_relative_margin(const std::vector<MarginRecord>& records) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    const double denom = r.scale > 0.0 ? r.scale : 1.0;
    m = std::min(m, r.margin / denom);
  }
  return m;
}

}  // namespace gapmm
