#pragma once

#include <string>
#include <vector>

#include "gapmm/report.hpp"

namespace gapmm {

// Radial potential with a Coulomb-type singular part and declared bound
// constants: -nu/r - c1 <= V(r) <= c2 on its domain.
class PotentialSpec {
 public:
  enum class Kind { kCoulomb, kRegularizedCoulomb, kCoulombPlusBounded, kTabulated };

  static PotentialSpec coulomb(double nu);
  static PotentialSpec regularized_coulomb(double nu, double epsilon);
  static PotentialSpec coulomb_plus_bounded(double nu, std::vector<double> radii,
                                            std::vector<double> values, double c1, double c2,
                                            int interp_order = 1);
  static PotentialSpec tabulated(std::vector<double> radii, std::vector<double> values,
                                 int interp_order, double c1, double c2);

  double operator()(double r) const;

  Kind kind() const { return kind_; }
  double nu() const { return nu_; }
  double epsilon() const { return epsilon_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  int interp_order() const { return interp_order_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& values() const { return values_; }
  std::string kind_name() const;

 private:
  PotentialSpec() = default;
  void prepare_table();
  double table_value(double r) const;

  Kind kind_ = Kind::kCoulomb;
  double nu_ = 0.0;
  double epsilon_ = 0.0;
  double c1_ = 0.0;
  double c2_ = 0.0;
  int interp_order_ = 1;
  std::vector<double> radii_, values_, second_;
};

// (V1) decay at infinity, checked numerically at a far probe radius with
// threshold 1e-8; (V2) the declared Coulomb bounds on a dense sample;
// (V3) c1, c2 >= 0 and c1 + c2 - 1 < sqrt(1 - nu^2), reporting the margin.
VerificationReport check_admissible(const PotentialSpec& v);

// Two-column text table (r, V), '#' comments allowed, radii strictly
// increasing.
PotentialSpec load_tabulated(const std::string& path, int interp_order, double c1, double c2);

}  // namespace gapmm
