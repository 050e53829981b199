#pragma once

#include <vector>

namespace gapmm {

// Breakpoints on [0, r_max] with exponential stretching: adjacent interval
// lengths grow by `stretch`, so the mesh is densest at the origin.
struct RadialGrid {
  double r_max = 60.0;
  int n_intervals = 64;
  double stretch = 1.07;

  std::vector<double> breakpoints() const;

  static RadialGrid exponential(double r_max, int n_intervals, double stretch = 1.07);
};

}  // namespace gapmm
