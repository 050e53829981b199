#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gapmm/bspline.hpp"
#include "gapmm/minmax.hpp"
#include "gapmm/potentials.hpp"
#include "gapmm/split_operator.hpp"

namespace gapmm {

// Radial Dirac operator at angular quantum number kappa, acting on pairs
// (f, g) of radial components with the block form
//   [ m + V          -d/dr + kappa/r ]
//   [ d/dr + kappa/r      -m + V     ],
// assembled in the same spline basis for both components.
struct RadialChannel {
  int kappa = -1;
  double mass = 1.0;
  PotentialSpec potential = PotentialSpec::coulomb(0.0);
  std::shared_ptr<const SplineBasis> basis;
  int quad_order = 0;

  Eigen::MatrixXd overlap;    // int B_i B_j
  Eigen::MatrixXd deriv;      // int B_i B_j'
  Eigen::MatrixXd inv_r;      // int B_i B_j / r
  Eigen::MatrixXd v_overlap;  // int B_i V B_j

  // Matrix of f -> f' + kappa f / r.
  Eigen::MatrixXd d_kappa() const { return deriv + double(kappa) * inv_r; }
};

// Per-interval Gauss quadrature of order basis->order() + 4 unless overridden.
RadialChannel assemble_channel(std::shared_ptr<const SplineBasis> basis,
                               const PotentialSpec& potential, int kappa, double mass = 1.0,
                               int quad_order = 0);

// Component split: "+" spans the upper-component spline copies (B_i, 0),
// "-" the lower ones (0, B_i).
SplitOperator talman_split(const RadialChannel& ch);

// Energy-indexed Schur form of the component splitting with the lower-block
// maximization carried out pointwise inside the quadrature:
//   q_E[f] = int (m + V - E) f^2 + int (Df)^2 / (m - V + E),
//   g_E[f] = int f^2 + int (Df)^2 / (m - V + E)^2,   Df = f' + kappa f / r,
// assembled on the retained splines. Restricting only the upper component
// keeps the discrete levels upper bounds of the continuum ones, so no
// spurious level can appear below them (the same-basis block pencil loses
// this for kappa > 0, where it grows an extra level near the ground state
// of the mirror channel).
class TalmanSchurFamily final : public SchurFamily {
 public:
  explicit TalmanSchurFamily(const RadialChannel& ch);
  int dim() const override { return n_basis_; }
  double gap_constant() const override { return a_; }
  double level_search_start() const override { return mass_ + 2.0; }
  SchurPencil pencil(double energy) const override;

 private:
  struct Node {
    double w = 0.0;          // quadrature weight
    double v = 0.0;          // potential value
    int first_full = 0;      // first full spline index supported here
    std::array<double, kMaxSplineOrder> b{};  // spline values
    std::array<double, kMaxSplineOrder> d{};  // (d/dr + kappa/r) applied
  };
  int n_basis_ = 0;
  int n_full_ = 0;
  int order_ = 0;
  double mass_ = 1.0;
  double a_ = 0.0;
  std::vector<Node> nodes_;
};

// Split along the sign of the free (V = 0) channel's discrete pencil modes.
struct FreeEnergySplit {
  SplitOperator op;
  Eigen::MatrixXd modes;          // columns S-orthonormal, "+" modes first
  Eigen::VectorXd free_energies;  // matching column order
  int near_zero_modes = 0;        // |energy| <= 1e-12, kept on the "+" side
};
FreeEnergySplit free_energy_split(const RadialChannel& ch);

enum class Splitting { kTalman, kFreeEnergy };
std::string splitting_name(Splitting s);

struct ChannelOptions {
  Splitting splitting = Splitting::kTalman;
  int k_max = 1;
  SolveOptions solve;
  // A level counts as inside the gap only when lambda < mass - edge_margin;
  // levels hugging the upper edge are reported but flagged.
  double edge_margin = 1e-3;
};

struct ChannelSolution {
  Splitting splitting = Splitting::kTalman;
  HypothesisReport hypothesis;
  bool hypotheses_ok = false;
  std::vector<MinMaxSolution> levels;
  std::vector<bool> in_gap;  // parallel to levels
};

// Hypothesis check followed by levels 1..k_max; stops early when a level no
// longer brackets. A failed hypothesis is reported, not thrown.
ChannelSolution channel_spectrum(const RadialChannel& ch, const ChannelOptions& opts);

// Bound-state energies of the point Coulomb channel at unit mass:
//   E = [1 + nu^2 / (n_r + sqrt(kappa^2 - nu^2))^2]^{-1/2},
// with n_r >= 1 required when kappa > 0.
double analytic_dirac_coulomb(double nu, int kappa, int n_radial);

// T(lambda) = int (m + V - lambda) f^2 + int (Df)^2 / (m - V + lambda) with
// Df = f' + kappa f / r, evaluated by per-interval quadrature; returns its
// unique root above -m. This is the upper-component energy functional whose
// minimum over f is the first level.
double talman_lambda_functional(const RadialChannel& ch, const Eigen::VectorXd& f_coeffs,
                                double tol = 1e-12);

// Spline projection of the optimal lower component (Df) / (m - V + lambda)
// for a fixed upper component.
Eigen::VectorXd chi_from_phi(const RadialChannel& ch, const Eigen::VectorXd& f_coeffs,
                             double lambda);

// Gram projection of a radial function onto the retained splines.
Eigen::VectorXd project_to_basis(const RadialChannel& ch, const std::function<double(double)>& f);

}  // namespace gapmm
