#pragma once

#include <optional>
#include <string>

#include "gapmm/minmax.hpp"
#include "gapmm/random_pencils.hpp"
#include "gapmm/report.hpp"

namespace gapmm {

// Randomized checks, on a fixed split operator, of the graph-norm and
// Schur-form inequalities for a < E < E':
//   ||x||_S <= n_{E'}(x) <= n_E(x) <= (E'-a)/(E-a) n_{E'}(x),
//   (E'-E) n_{E'}^2(x) <= Q_E(x) - Q_{E'}(x) <= (E'-E) n_E^2(x),
// plus sup-consistency: the Schur form value is attained by the explicit
// maximizer and not exceeded along random "-" directions.
struct MonotonicityOptions {
  int samples = 1000;
  unsigned long long seed = 2718281828ull;
  double slack = 1e-10;  // relative to |lhs| + |rhs| per comparison
  int sup_directions = 4;
};
VerificationReport minmax_property_suite(const SplitOperator& op,
                                         const MonotonicityOptions& opts);

// Random gap pencils solved level-by-level against the dense pencil
// eigensolver; interleaved counterexamples violating the positivity
// hypothesis must be rejected (hypothesis check fails and level 1 refuses to
// bracket).
struct FuzzOptions {
  int instances = 500;
  int dim = 0;  // 0: random total dimension in [4, 40]
  unsigned long long seed = 7;
  double match_tol = 1e-9;
  int counterexample_every = 10;  // 0 disables interleaving
};
struct FuzzOutcome {
  int instances = 0;
  int oracle_checked = 0;
  int agreements = 0;
  int counterexamples = 0;
  int rejected = 0;
  double max_deviation = 0.0;
  bool pass = false;
  std::string failure_note;
  std::optional<SplitOperator> failing;  // serialized for replay on failure
};
FuzzOutcome oracle_fuzz(const FuzzOptions& opts);

}  // namespace gapmm
