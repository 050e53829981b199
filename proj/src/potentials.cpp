#include "gapmm/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gapmm {

namespace {

void require_nu(double nu) {
  if (!(nu >= 0.0 && nu < 1.0)) {
    throw std::invalid_argument("PotentialSpec: coupling must satisfy 0 <= nu < 1");
  }
}

void require_table(const std::vector<double>& radii, const std::vector<double>& values,
                   int interp_order) {
  if (radii.size() < 2 || radii.size() != values.size()) {
    throw std::invalid_argument("PotentialSpec: table needs at least two (r, V) samples");
  }
  if (radii.front() < 0.0) throw std::invalid_argument("PotentialSpec: negative radius in table");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) {
      throw std::invalid_argument("PotentialSpec: table radii must be strictly increasing");
    }
  }
  if (interp_order != 1 && interp_order != 3) {
    throw std::invalid_argument("PotentialSpec: interpolation order must be 1 or 3");
  }
}

}  // namespace

PotentialSpec PotentialSpec::coulomb(double nu) {
  require_nu(nu);
  PotentialSpec v;
  v.kind_ = Kind::kCoulomb;
  v.nu_ = nu;
  return v;
}

PotentialSpec PotentialSpec::regularized_coulomb(double nu, double epsilon) {
  require_nu(nu);
  if (!(epsilon >= 0.0)) throw std::invalid_argument("PotentialSpec: epsilon must be >= 0");
  PotentialSpec v;
  v.kind_ = Kind::kRegularizedCoulomb;
  v.nu_ = nu;
  v.epsilon_ = epsilon;
  return v;
}

PotentialSpec PotentialSpec::coulomb_plus_bounded(double nu, std::vector<double> radii,
                                                  std::vector<double> values, double c1,
                                                  double c2, int interp_order) {
  require_nu(nu);
  require_table(radii, values, interp_order);
  PotentialSpec v;
  v.kind_ = Kind::kCoulombPlusBounded;
  v.nu_ = nu;
  v.c1_ = c1;
  v.c2_ = c2;
  v.interp_order_ = interp_order;
  v.radii_ = std::move(radii);
  v.values_ = std::move(values);
  v.prepare_table();
  return v;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> radii, std::vector<double> values,
                                       int interp_order, double c1, double c2) {
  require_table(radii, values, interp_order);
  PotentialSpec v;
  v.kind_ = Kind::kTabulated;
  v.c1_ = c1;
  v.c2_ = c2;
  v.interp_order_ = interp_order;
  v.radii_ = std::move(radii);
  v.values_ = std::move(values);
  v.prepare_table();
  return v;
}

void PotentialSpec::prepare_table() {
  if (interp_order_ != 3) return;
  // Natural cubic spline second derivatives.
  const int n = static_cast<int>(radii_.size());
  second_.assign(n, 0.0);
  std::vector<double> u(n, 0.0);
  for (int i = 1; i < n - 1; ++i) {
    const double sig = (radii_[i] - radii_[i - 1]) / (radii_[i + 1] - radii_[i - 1]);
    const double p = sig * second_[i - 1] + 2.0;
    second_[i] = (sig - 1.0) / p;
    u[i] = (values_[i + 1] - values_[i]) / (radii_[i + 1] - radii_[i]) -
           (values_[i] - values_[i - 1]) / (radii_[i] - radii_[i - 1]);
    u[i] = (6.0 * u[i] / (radii_[i + 1] - radii_[i - 1]) - sig * u[i - 1]) / p;
  }
  for (int i = n - 2; i >= 0; --i) second_[i] = second_[i] * second_[i + 1] + u[i];
}

double PotentialSpec::table_value(double r) const {
  if (r <= radii_.front()) return values_.front();
  if (r >= radii_.back()) return values_.back();
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
  const int hi = static_cast<int>(it - radii_.begin());
  const int lo = hi - 1;
  const double h = radii_[hi] - radii_[lo];
  const double a = (radii_[hi] - r) / h;
  const double b = (r - radii_[lo]) / h;
  double val = a * values_[lo] + b * values_[hi];
  if (interp_order_ == 3) {
    val += ((a * a * a - a) * second_[lo] + (b * b * b - b) * second_[hi]) * h * h / 6.0;
  }
  return val;
}

double PotentialSpec::operator()(double r) const {
  switch (kind_) {
    case Kind::kCoulomb:
      if (!(r > 0.0)) throw std::domain_error("PotentialSpec: Coulomb potential undefined at r <= 0");
      return -nu_ / r;
    case Kind::kRegularizedCoulomb:
      if (!(r + epsilon_ > 0.0)) {
        throw std::domain_error("PotentialSpec: regularized Coulomb needs r + epsilon > 0");
      }
      return -nu_ / (r + epsilon_);
    case Kind::kCoulombPlusBounded:
      if (!(r > 0.0)) throw std::domain_error("PotentialSpec: Coulomb potential undefined at r <= 0");
      return -nu_ / r + table_value(r);
    case Kind::kTabulated:
      if (r < 0.0) throw std::domain_error("PotentialSpec: negative radius");
      return table_value(r);
  }
  throw std::logic_error("PotentialSpec: unknown kind");
}

std::string PotentialSpec::kind_name() const {
  switch (kind_) {
    case Kind::kCoulomb: return "coulomb";
    case Kind::kRegularizedCoulomb: return "regularized-coulomb";
    case Kind::kCoulombPlusBounded: return "coulomb-plus-bounded";
    case Kind::kTabulated: return "tabulated";
  }
  return "unknown";
}

VerificationReport check_admissible(const PotentialSpec& v) {
  VerificationReport rep;

  double far = 1e8;
  if (!v.radii().empty()) far = std::max(far, 2.0 * v.radii().back());
  double tail = 0.0;
  bool decay_ok = true;
  try {
    tail = std::abs(v(far));
    decay_ok = tail <= 1e-8;
  } catch (const std::exception&) {
    decay_ok = false;
  }
  rep.add("decay_at_infinity", decay_ok, tail, "|V| at far probe radius");

  // Dense log-spaced sample of the declared two-sided Coulomb bound.
  double worst = 0.0;
  bool bounds_ok = true;
  const double r_hi = v.radii().empty() ? 1e3 : std::max(1e3, 2.0 * v.radii().back());
  const int n_samples = 2000;
  for (int i = 0; i < n_samples; ++i) {
    const double t = double(i) / double(n_samples - 1);
    const double r = 1e-6 * std::pow(r_hi / 1e-6, t);
    double val = 0.0;
    try {
      val = v(r);
    } catch (const std::exception&) {
      bounds_ok = false;
      break;
    }
    const double slack = 1e-12 * (1.0 + std::abs(val) + v.nu() / r);
    const double lower = -v.nu() / r - v.c1() - slack;
    const double upper = v.c2() + slack;
    worst = std::max({worst, lower - val, val - upper});
  }
  bounds_ok = bounds_ok && worst <= 0.0;
  rep.add("coulomb_bounds", bounds_ok, worst, "max violation of -nu/r - c1 <= V <= c2");

  const double margin = std::sqrt(1.0 - v.nu() * v.nu()) - (v.c1() + v.c2() - 1.0);
  const bool constants_ok = v.c1() >= 0.0 && v.c2() >= 0.0 && margin > 0.0;
  rep.add("constants_inequality", constants_ok, margin,
          "sqrt(1 - nu^2) - (c1 + c2 - 1), must be positive");

  return rep;
}

PotentialSpec load_tabulated(const std::string& path, int interp_order, double c1, double c2) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_tabulated: cannot open " + path);
  std::vector<double> radii, values;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double r = 0.0, val = 0.0;
    if (ss >> r >> val) {
      radii.push_back(r);
      values.push_back(val);
    }
  }
  return PotentialSpec::tabulated(std::move(radii), std::move(values), interp_order, c1, c2);
}

}  // namespace gapmm
