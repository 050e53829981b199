#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "gapmm/split_operator.hpp"

namespace gapmm {

// Deterministic random stream: Box-Muller over raw mt19937_64 bits, so fuzz
// instances replay identically across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  int uniform_int(int lo, int hi);  // inclusive bounds

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

Eigen::MatrixXd random_orthogonal(Rng& rng, int n);

// Gram matrix with eigenvalues in [1, 1 + spread].
Eigen::MatrixXd random_gram(Rng& rng, int n, double spread = 0.5);

struct GapPencilSpec {
  int dim_plus = 3;
  int dim_minus = 3;
  double band_bottom = -4.0;  // lowest "-" branch eigenvalue
  double band_spread = 2.5;   // width of each band
  double gap_width = 1.0;     // distance between the bands
  double coupling = 0.2;      // ||C|| as a fraction of the gap width
  bool random_gram = true;
};

// Whitened form [[M+, C], [C^T, M-]] with max eig(M-) + gap <= min eig(M+)
// and ||C|| <= coupling * gap: no pencil eigenvalue lies strictly between the
// bands, so the positivity hypothesis holds with a certified margin and every
// level above the gap constant is genuine.
SplitOperator random_gap_operator(Rng& rng, const GapPencilSpec& spec);

// One "+" branch eigenvalue is pushed below the top of the "-" band with only
// weak coupling, so the positivity hypothesis fails at every probe.
SplitOperator random_iii_violator(Rng& rng, int dim_plus, int dim_minus);

}  // namespace gapmm
