#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "gapmm/split_operator.hpp"

namespace gapmm {

// Raised when a requested energy is not above the gap constant, or when the
// positivity hypothesis fails at every probe.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the level root-finder cannot establish a sign change.
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Schur complement of the shifted pencil with respect to the "-" block:
//   q = a_pp - E s_pp + a_pm (E s_mm - a_mm)^{-1} a_pm^T
//   g = s_pp + Y^T s_mm Y,  Y = (E s_mm - a_mm)^{-1} a_pm^T
// g is the Gram of the graph norm attached to E.
struct SchurPencil {
  double energy = 0.0;
  Eigen::MatrixXd q_matrix;
  Eigen::MatrixXd g_matrix;
};

// One-parameter family of Schur forms indexed by energy. The hypothesis
// checks and the level root-finder run against this interface, so the same
// machinery serves assembled block operators and forms whose "-" block
// maximization is carried out analytically inside the quadrature.
class SchurFamily {
 public:
  virtual ~SchurFamily() = default;
  virtual int dim() const = 0;            // size of the "+" block
  virtual double gap_constant() const = 0;
  // Finite energy seeding the upper bracket search (doubled until the sign flips).
  virtual double level_search_start() const = 0;
  // Throws HypothesisError at or below the gap constant.
  virtual SchurPencil pencil(double energy) const = 0;
};

// Family view of an assembled SplitOperator.
class MatrixSchurFamily final : public SchurFamily {
 public:
  explicit MatrixSchurFamily(SplitOperator op);
  int dim() const override { return op_.dim_plus(); }
  double gap_constant() const override { return a_; }
  double level_search_start() const override;
  SchurPencil pencil(double energy) const override;
  const SplitOperator& op() const { return op_; }

 private:
  SplitOperator op_;
  double a_ = 0.0;
};

struct HypothesisReport {
  double a_value = 0.0;
  double probe_energy = 0.0;
  double q_min_eigenvalue = 0.0;
  bool condition_ii = false;   // gap constant finite
  bool condition_iii = false;  // Schur form nonnegative at the probe
  bool pass() const { return condition_ii && condition_iii; }
};

struct SolveOptions {
  double tol = 1e-10;
  double residual_tol = 1e-9;
  int max_secant = 5;
};

struct MinMaxSolution {
  int k = 0;
  double lambda = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double residual = 0.0;
  int multiplicity = 1;
  bool residual_ok = true;
};

// Largest eigenvalue of the pencil (a_mm, s_mm): the supremum of the Rayleigh
// quotient over the "-" block.
double gap_constant(const SplitOperator& op);

// Unique maximizer y of phi_{E,x}(y) = (x+y, A(x+y)) - E ||x+y||^2 over the
// "-" block; solves (E s_mm - a_mm) y = a_pm^T x. Requires E > gap constant.
Eigen::VectorXd maximizer_L(const SplitOperator& op, double E, const Eigen::VectorXd& x_plus);

// phi_{E,x}(y), for tests and brute-force cross-checks.
double phi_form(const SplitOperator& op, double E, const Eigen::VectorXd& x_plus,
                const Eigen::VectorXd& y_minus);

SchurPencil schur_pencil(const SplitOperator& op, double E);

// Ascending eigenvalues of the pencil (q, g) at energy E; ell_k picks the
// k-th smallest (k is 1-based).
Eigen::VectorXd ell_all(const SplitOperator& op, double E);
double ell_k(const SplitOperator& op, double E, int k);

// Number of eigenvalues of the pencil (q, g) below zero, computed from the
// inertia of q after symmetric equilibration; robust for strongly graded
// matrices where a dense eigensolver would lose the small eigenvalues.
int negative_count(const Eigen::MatrixXd& q, double threshold = 1e-11);

HypothesisReport check_hypotheses(const SchurFamily& fam, double probe_energy);
HypothesisReport check_hypotheses(const SplitOperator& op, double probe_energy);

// Retries with probes approaching the gap constant before giving up.
HypothesisReport check_hypotheses_retry(const SchurFamily& fam, double probe_energy,
                                        int max_retries = 6);
HypothesisReport check_hypotheses_retry(const SplitOperator& op, double probe_energy,
                                        int max_retries = 6);

// k-th min-max level: the unique root of lambda -> ell_k at energy lambda,
// located by bisection on the sign (via inertia) plus clamped secant steps.
// The family version reports the defect of the (q, g) pencil as residual;
// the operator version replaces it with the two-component dual-norm residual.
MinMaxSolution solve_level(const SchurFamily& fam, int k, const SolveOptions& opts);
MinMaxSolution solve_level(const SplitOperator& op, int k, double tol = 1e-10);
MinMaxSolution solve_level(const SplitOperator& op, int k, const SolveOptions& opts);

Eigen::VectorXd ell_all(const SchurFamily& fam, double energy);
double ell_k(const SchurFamily& fam, double energy, int k);

// Root of lambda -> q-form of a fixed "+" vector; the min over the "+" block
// of this quantity at level k=1 equals the first level.
double lambda_of_vector(const SplitOperator& op, const Eigen::VectorXd& x_plus,
                        double tol = 1e-10);

// Full-space eigenvector for a solved level: "+" part from the pencil
// eigenvector nearest zero, "-" part from maximizer_L.
Eigen::VectorXd reconstruct_eigenvector(const SplitOperator& op, const MinMaxSolution& sol);

// Eigenvalues of the full pencil (A, S) in the open interval (lo, hi),
// ascending with multiplicity. Reference path for cross-checks.
std::vector<double> dense_oracle(const SplitOperator& op, double lo, double hi);

// Largest eigenvalue of the full pencil (A, S); +1 gives the upper root bracket.
double full_pencil_max(const SplitOperator& op);

}  // namespace gapmm
