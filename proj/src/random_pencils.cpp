#include "gapmm/random_pencils.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace gapmm {

double Rng::uniform() {
  return double(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  do {
    u = uniform();
  } while (u <= 0.0);
  const double v = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u));
  spare_ = rad * std::sin(2.0 * M_PI * v);
  have_spare_ = true;
  return rad * std::cos(2.0 * M_PI * v);
}

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(eng_() % span);
}

Eigen::MatrixXd random_orthogonal(Rng& rng, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Eigen::MatrixXd random_gram(Rng& rng, int n, double spread) {
  const Eigen::MatrixXd q = random_orthogonal(rng, n);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = 1.0 + spread * rng.uniform();
  return q * d.asDiagonal() * q.transpose();
}

namespace {

Eigen::MatrixXd random_symmetric_with_spectrum(Rng& rng, const Eigen::VectorXd& eigs) {
  const int n = static_cast<int>(eigs.size());
  const Eigen::MatrixXd q = random_orthogonal(rng, n);
  return q * eigs.asDiagonal() * q.transpose();
}

SplitOperator dress_with_gram(Rng& rng, const Eigen::MatrixXd& m_plus,
                              const Eigen::MatrixXd& m_minus, const Eigen::MatrixXd& c,
                              bool random_gram_blocks) {
  const int np = static_cast<int>(m_plus.rows());
  const int nm = static_cast<int>(m_minus.rows());
  SplitOperator op;
  op.s_pp = random_gram_blocks ? random_gram(rng, np) : Eigen::MatrixXd::Identity(np, np);
  op.s_mm = random_gram_blocks ? random_gram(rng, nm) : Eigen::MatrixXd::Identity(nm, nm);
  const Eigen::MatrixXd lp = Eigen::LLT<Eigen::MatrixXd>(op.s_pp).matrixL();
  const Eigen::MatrixXd lm = Eigen::LLT<Eigen::MatrixXd>(op.s_mm).matrixL();
  op.a_pp = lp * m_plus * lp.transpose();
  op.a_mm = lm * m_minus * lm.transpose();
  op.a_pm = lp * c * lm.transpose();
  op.a_pp = (0.5 * (op.a_pp + op.a_pp.transpose())).eval();
  op.a_mm = (0.5 * (op.a_mm + op.a_mm.transpose())).eval();
  op.validate();
  return op;
}

}  // namespace

SplitOperator random_gap_operator(Rng& rng, const GapPencilSpec& spec) {
  const int np = spec.dim_plus, nm = spec.dim_minus;
  if (np < 1 || nm < 1) throw std::invalid_argument("random_gap_operator: empty block");
  const double minus_top = spec.band_bottom + spec.band_spread;
  const double plus_bottom = minus_top + spec.gap_width;

  Eigen::VectorXd minus_eigs(nm), plus_eigs(np);
  minus_eigs[0] = minus_top;  // pins the gap constant exactly
  for (int i = 1; i < nm; ++i) minus_eigs[i] = rng.uniform(spec.band_bottom, minus_top);
  for (int i = 0; i < np; ++i) plus_eigs[i] = rng.uniform(plus_bottom, plus_bottom + spec.band_spread);

  const Eigen::MatrixXd m_plus = random_symmetric_with_spectrum(rng, plus_eigs);
  const Eigen::MatrixXd m_minus = random_symmetric_with_spectrum(rng, minus_eigs);

  Eigen::MatrixXd c(np, nm);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nm; ++j) c(i, j) = rng.normal();
  const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(c).singularValues()(0);
  if (norm > 0.0) c *= spec.coupling * spec.gap_width / norm;

  return dress_with_gram(rng, m_plus, m_minus, c, spec.random_gram);
}

SplitOperator random_iii_violator(Rng& rng, int dim_plus, int dim_minus) {
  GapPencilSpec spec;
  spec.dim_plus = dim_plus;
  spec.dim_minus = dim_minus;
  const double minus_top = spec.band_bottom + spec.band_spread;
  const double plus_bottom = minus_top + spec.gap_width;

  Eigen::VectorXd minus_eigs(dim_minus), plus_eigs(dim_plus);
  minus_eigs[0] = minus_top;
  for (int i = 1; i < dim_minus; ++i)
    minus_eigs[i] = rng.uniform(spec.band_bottom, minus_top - 0.3);
  // One branch sunk well below the "-" band top breaks the positivity
  // hypothesis no matter the probe.
  plus_eigs[0] = minus_top - 1.0 - rng.uniform();
  for (int i = 1; i < dim_plus; ++i) plus_eigs[i] = rng.uniform(plus_bottom, plus_bottom + spec.band_spread);

  const Eigen::MatrixXd m_plus = random_symmetric_with_spectrum(rng, plus_eigs);
  const Eigen::MatrixXd v = random_orthogonal(rng, dim_minus);
  const Eigen::MatrixXd m_minus = v * minus_eigs.asDiagonal() * v.transpose();

  Eigen::MatrixXd c(dim_plus, dim_minus);
  for (int i = 0; i < dim_plus; ++i)
    for (int j = 0; j < dim_minus; ++j) c(i, j) = rng.normal();
  const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(c).singularValues()(0);
  if (norm > 0.0) c *= 0.05 / norm;
  // Keep the top "-" eigenvector uncoupled so one pencil eigenvalue sits
  // exactly at the gap constant: together with the sunk branch and the rest
  // of the "-" band (capped 0.3 below the top, so small couplings cannot
  // push any of them across) there are dim_minus + 1 eigenvalues at or below
  // the gap constant, which makes the Schur form indefinite just above it at
  // every probe energy.
  const Eigen::VectorXd v_top = v.col(0);
  c -= (c * v_top) * v_top.transpose();

  return dress_with_gram(rng, m_plus, m_minus, c, true);
}

}  // namespace gapmm
