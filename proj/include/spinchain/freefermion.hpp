#pragma once

// Quasi-exact engine for XY-family chains: spectrum of the Majorana form,
// operator-space and thermal correlation matrices, OSEE, block entropies,
// QMI, spectral gap, and gap-decay-length fits.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "spinchain/linalg.hpp"
#include "spinchain/models.hpp"
#include "spinchain/numerics.hpp"

namespace spinchain {

// Nonnegative eigenvalue branch of the Majorana form: 0 <= lambda_1 <= ... <=
// lambda_n with orthonormal eigenvectors as columns. The paired branch
// (-lambda_k, v_k*) is implied and never stored.
struct FermionSpectrum {
  int n = 0;
  Vector lambdas;   // n, ascending
  CMatrix vectors;  // 2n x n
};

struct EntropyReport {
  double beta = 0.0;
  int n = 0;
  int n_a = 0;
  double s_sharp = 0.0;
  double s_a = 0.0;
  double s_b = 0.0;
  double s_total = 0.0;
  double qmi = 0.0;
};

inline FermionSpectrum fermion_spectrum(const MajoranaForm& form) {
  const auto eig = linalg::eigh(form.h);  // ascending: -lambda_n..-lambda_1, lambda_1..lambda_n
  FermionSpectrum spec;
  spec.n = form.n;
  spec.lambdas = eig.values.tail(form.n);
  spec.vectors = eig.vectors.rightCols(form.n);
  return spec;
}

namespace detail {

// tanh(c*beta*lambda) and 1-sech(c*beta*lambda), safe for beta = +infinity
// (zero modes contribute zero at any beta, including the limit).
inline double occupancy_arg(double c, double beta, double lambda) {
  const double a = c * beta * lambda;
  return std::isnan(a) ? 0.0 : a;  // inf * 0
}

// M_f[j,l] = sum_k f_k conj(v_{k,j}) v_{k,l} = conj(V) diag(f) V^T.
inline CMatrix mode_sum(const FermionSpectrum& spec, const Vector& f) {
  return spec.vectors.conjugate() * f.asDiagonal() * spec.vectors.transpose();
}

}  // namespace detail

// Operator-space correlation matrix (4n x 4n). In 1-based Majorana-mode
// indices j,l = 1..2n the displayed families are
//   G_{2j-1,2l-1} = -G_{2j,2l} = -2 sum_k tanh(4 beta lambda_k) Im(v*_{kj} v_{kl})
//   G_{2j,2l-1}   = delta_jl - 2 sum_k (1 - sech(4 beta lambda_k)) Re(v*_{kj} v_{kl})
// and the fourth family follows by antisymmetry. The delta term stays inside
// the matrix: at beta = 0 the blocks are [[0,-1],[1,0]] per mode, every
// nu_j = 1, and the OSEE of the identity super-ket comes out 0. Verified
// against the dense super-ket oracle, which fixes the index convention.
inline AntisymmetricMatrix gamma_operator_space(const FermionSpectrum& spec, double beta) {
  if (beta < 0.0) throw std::domain_error("gamma_operator_space: beta must be >= 0");
  const int twon = 2 * spec.n;
  Vector t(spec.n), s(spec.n);
  for (int k = 0; k < spec.n; ++k) {
    const double a = detail::occupancy_arg(4.0, beta, spec.lambdas(k));
    t(k) = std::tanh(a);
    s(k) = 1.0 - stable_sech(a);
  }
  const CMatrix mt = detail::mode_sum(spec, t);
  const CMatrix ms = detail::mode_sum(spec, s);
  Matrix g = Matrix::Zero(2 * twon, 2 * twon);
  auto set = [&g](int p, int q, double v) {
    g(p, q) = v;
    g(q, p) = -v;
  };
  for (int j = 0; j < twon; ++j) {
    for (int l = j; l < twon; ++l) {
      const double im = mt(j, l).imag();
      const double re = ms(j, l).real();
      if (l > j) {
        set(2 * j, 2 * l, -2.0 * im);        // odd-odd (1-based)
        set(2 * j + 1, 2 * l + 1, 2.0 * im); // even-even
        set(2 * l + 1, 2 * j, -2.0 * re);    // even(l), odd(j), j != l
      }
      set(2 * j + 1, 2 * l, (j == l ? 1.0 : 0.0) - 2.0 * re);  // even(j), odd(l)
    }
  }
  return AntisymmetricMatrix(std::move(g));
}

// Thermal 2-point correlation matrix (2n x 2n):
//   tr(w_j w_l e^{-beta H}) / tr e^{-beta H} = delta_jl + i G'_jl,
//   G'_jl = -2 sum_k tanh(2 beta lambda_k) Im(v*_{kj} v_{kl}).
inline AntisymmetricMatrix gamma_thermal(const FermionSpectrum& spec, double beta) {
  if (beta < 0.0) throw std::domain_error("gamma_thermal: beta must be >= 0");
  const int twon = 2 * spec.n;
  Vector t(spec.n);
  for (int k = 0; k < spec.n; ++k)
    t(k) = std::tanh(detail::occupancy_arg(2.0, beta, spec.lambdas(k)));
  const CMatrix mt = detail::mode_sum(spec, t);
  Matrix g = Matrix::Zero(twon, twon);
  for (int j = 0; j < twon; ++j)
    for (int l = j + 1; l < twon; ++l) {
      g(j, l) = -2.0 * mt(j, l).imag();
      g(l, j) = -g(j, l);
    }
  return AntisymmetricMatrix(std::move(g));
}

namespace detail {
inline double entropy_of_nu(const NuSpectrum& nu) {
  double out = 0.0;
  for (const double v : nu.values) out += binary_entropy((1.0 + v) / 2.0);
  return out;
}
}  // namespace detail

// OSEE at cut n_A from the upper-left 4 n_A x 4 n_A block of the
// operator-space correlation matrix: S# = sum_j H2((1+nu_j)/2).
inline double osee(const AntisymmetricMatrix& gamma, int n_a) {
  const int n = static_cast<int>(gamma.dim() / 4);
  if (n_a < 1 || n_a >= n) throw std::invalid_argument("osee: cut must satisfy 1 <= n_A < n");
  return detail::entropy_of_nu(antisymmetric_spectrum(gamma.block(0, 4 * n_a)));
}

// Block entropy of the contiguous site range [site_lo, site_hi) from the
// matching Majorana sub-block of the thermal correlation matrix.
inline double block_entropy(const AntisymmetricMatrix& gamma_prime, int site_lo, int site_hi) {
  const int n = static_cast<int>(gamma_prime.dim() / 2);
  if (site_lo < 0 || site_hi > n || site_lo >= site_hi)
    throw std::invalid_argument("block_entropy: invalid contiguous site range");
  return detail::entropy_of_nu(
      antisymmetric_spectrum(gamma_prime.block(2 * site_lo, 2 * (site_hi - site_lo))));
}

// S(rho_A), S(rho_B), S(rho) from thermal-correlation blocks, plus
// I_{A:B} = S_A + S_B - S_total and the OSEE at the same cut.
inline EntropyReport qmi(const FermionSpectrum& spec, double beta, int n_a) {
  if (n_a < 1 || n_a >= spec.n) throw std::invalid_argument("qmi: cut must satisfy 1 <= n_A < n");
  EntropyReport rep;
  rep.beta = beta;
  rep.n = spec.n;
  rep.n_a = n_a;
  const AntisymmetricMatrix gp = gamma_thermal(spec, beta);
  rep.s_a = block_entropy(gp, 0, n_a);
  rep.s_b = block_entropy(gp, n_a, spec.n);
  rep.s_total = block_entropy(gp, 0, spec.n);
  rep.qmi = rep.s_a + rep.s_b - rep.s_total;
  rep.s_sharp = osee(gamma_operator_space(spec, beta), n_a);
  return rep;
}

// Energy gap between the two lowest levels: Delta E = 4 lambda_1.
inline double spectral_gap(const MajoranaForm& form) {
  return 4.0 * fermion_spectrum(form).lambdas(0);
}

struct GapFit {
  double xi = 0.0;        // decay length in Delta E ~ exp(-n/xi)
  double rms_residual = 0.0;  // RMS of ln-residuals (relative deviation)
  int points_used = 0;
};

inline constexpr double kGapFloor = 1e-13;  // gaps below this drown in roundoff

// Fit of ln Delta E against n over usable sizes; xi = -1/slope.
inline GapFit fit_gap_points(std::span<const std::pair<double, double>> n_gap) {
  std::vector<double> xs, ys;
  for (const auto& [n, gap] : n_gap) {
    if (gap < -kGapFloor) throw std::domain_error("gap fit: negative gap in the list");
    if (gap <= kGapFloor) continue;  // zero to machine precision, unusable
    xs.push_back(n);
    ys.push_back(std::log(gap));
  }
  if (xs.size() < 3) throw std::invalid_argument("gap fit: fewer than 3 usable sizes");
  const LinearFit fit = line_fit(xs, ys);
  if (fit.slope >= 0.0) throw std::domain_error("gap fit: no exponential decay detected");
  return {-1.0 / fit.slope, fit.rms_residual, static_cast<int>(xs.size())};
}

// Gap decay length for the XY family at fixed (gamma, h) over the given
// chain sizes.
inline GapFit gap_decay_length(double gamma, double h, std::span<const int> n_values) {
  if (n_values.size() < 3) throw std::invalid_argument("gap_decay_length: need >= 3 sizes");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(n_values.size());
  for (const int n : n_values)
    pts.emplace_back(n, spectral_gap(build_majorana_form(ChainSpec::xy(n, gamma, h))));
  return fit_gap_points(pts);
}

}  // namespace spinchain
