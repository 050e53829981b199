#include "gapmm/radial_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace gapmm {

RadialGrid RadialGrid::exponential(double r_max, int n_intervals, double stretch) {
  if (!(r_max > 0.0)) throw std::invalid_argument("RadialGrid: r_max must be positive");
  if (n_intervals < 1) throw std::invalid_argument("RadialGrid: need at least one interval");
  if (!(stretch >= 1.0)) throw std::invalid_argument("RadialGrid: stretch must be >= 1");
  return RadialGrid{r_max, n_intervals, stretch};
}

std::vector<double> RadialGrid::breakpoints() const {
  const int n = n_intervals;
  std::vector<double> t(n + 1);
  t[0] = 0.0;
  t[n] = r_max;
  if (std::abs(stretch - 1.0) < 1e-12) {
    for (int k = 1; k < n; ++k) t[k] = r_max * double(k) / double(n);
    return t;
  }
  // t_k = r_max * (rho^k - 1) / (rho^n - 1); expm1 keeps strong stretching finite.
  const double log_rho = std::log(stretch);
  const double denom = std::expm1(n * log_rho);
  for (int k = 1; k < n; ++k) {
    if (std::isfinite(denom)) {
      t[k] = r_max * std::expm1(k * log_rho) / denom;
    } else {
      t[k] = r_max * std::exp((k - n) * log_rho);
    }
  }
  return t;
}

}  // namespace gapmm
