#pragma once

// Dense brute-force reference for n <= 10: exact thermal states, OSEE via
// super-ket factorization, QMI via partial traces, purity and mutual purity.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spinchain/linalg.hpp"
#include "spinchain/models.hpp"
#include "spinchain/numerics.hpp"

namespace spinchain {

inline constexpr int kDenseMaxSites = 10;

struct DenseOperator {
  int n = 0;
  CMatrix matrix;  // 2^n x 2^n
};

namespace detail {
inline Eigen::Index pow2(int n) { return Eigen::Index{1} << n; }

inline void check_capacity(int n) {
  if (n < 1 || n > kDenseMaxSites)
    throw std::runtime_error("oracle: dense path supports 1 <= n <= " +
                             std::to_string(kDenseMaxSites));
}

inline void check_cut(int n, int n_a) {
  if (n_a < 1 || n_a >= n) throw std::invalid_argument("oracle: cut must satisfy 1 <= n_A < n");
}
}  // namespace detail

// Embeds op (acting on `width` adjacent sites starting at `site`) into the
// full 2^n space.
inline CMatrix embed(const CMatrix& op, int site, int n, int width) {
  CMatrix out = CMatrix::Identity(detail::pow2(site), detail::pow2(site));
  out = kron(out, op);
  const int tail = n - site - width;
  if (tail > 0) out = kron(out, CMatrix::Identity(detail::pow2(tail), detail::pow2(tail)));
  return out;
}

inline CMatrix dense_hamiltonian(const TermList& terms) {
  detail::check_capacity(terms.n);
  const Eigen::Index d = detail::pow2(terms.n);
  CMatrix h = CMatrix::Zero(d, d);
  for (const auto& b : terms.bonds) h += embed(b.op, b.site, terms.n, 2);
  for (const auto& s : terms.sites) h += embed(s.op, s.site, terms.n, 1);
  return h;
}

// rho(beta) = exp(-beta H) / tr exp(-beta H), via full eigendecomposition.
// beta = +infinity yields the normalized projector onto the ground space.
inline DenseOperator dense_thermal(const TermList& terms, double beta) {
  detail::check_capacity(terms.n);
  if (beta < 0.0) throw std::domain_error("dense_thermal: beta must be >= 0");
  const auto eig = linalg::eigh(dense_hamiltonian(terms));
  const double e0 = eig.values.minCoeff();
  Vector w(eig.values.size());
  if (std::isinf(beta)) {
    for (Eigen::Index i = 0; i < w.size(); ++i)
      w(i) = (eig.values(i) - e0 < 1e-12) ? 1.0 : 0.0;
  } else {
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta * (eig.values(i) - e0));
  }
  w /= w.sum();
  DenseOperator rho;
  rho.n = terms.n;
  rho.matrix = eig.vectors * w.asDiagonal() * eig.vectors.adjoint();
  return rho;
}

inline CMatrix partial_trace_keep_left(const CMatrix& rho, int n, int n_a) {
  const Eigen::Index da = detail::pow2(n_a), db = detail::pow2(n - n_a);
  CMatrix out = CMatrix::Zero(da, da);
  for (Eigen::Index ia = 0; ia < da; ++ia)
    for (Eigen::Index ja = 0; ja < da; ++ja)
      for (Eigen::Index b = 0; b < db; ++b) out(ia, ja) += rho(ia * db + b, ja * db + b);
  return out;
}

inline CMatrix partial_trace_keep_right(const CMatrix& rho, int n, int n_a) {
  const Eigen::Index da = detail::pow2(n_a), db = detail::pow2(n - n_a);
  CMatrix out = CMatrix::Zero(db, db);
  for (Eigen::Index ib = 0; ib < db; ++ib)
    for (Eigen::Index jb = 0; jb < db; ++jb)
      for (Eigen::Index a = 0; a < da; ++a) out(ib, jb) += rho(a * db + ib, a * db + jb);
  return out;
}

inline double von_neumann_entropy(const CMatrix& rho) {
  const Vector ev = linalg::eigh(rho).values;
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-300) s -= ev(i) * std::log2(ev(i));
  return s;
}

// OSEE of a density operator: regroup rho's indices from (iA iB),(jA jB) to a
// 4^{n_A} x 4^{n_B} matrix with rows (iA jA); its singular values are the
// super-ket Schmidt coefficients.
inline double dense_osee(const DenseOperator& rho, int n_a) {
  detail::check_cut(rho.n, n_a);
  const Eigen::Index da = detail::pow2(n_a), db = detail::pow2(rho.n - n_a);
  CMatrix regrouped(da * da, db * db);
  for (Eigen::Index ia = 0; ia < da; ++ia)
    for (Eigen::Index ib = 0; ib < db; ++ib)
      for (Eigen::Index ja = 0; ja < da; ++ja)
        for (Eigen::Index jb = 0; jb < db; ++jb)
          regrouped(ia * da + ja, ib * db + jb) = rho.matrix(ia * db + ib, ja * db + jb);
  const Vector s = linalg::svd(regrouped).s;
  const double tot = s.squaredNorm();
  if (tot <= 0.0) throw std::runtime_error("dense_osee: zero operator");
  double out = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double p = s(i) * s(i) / tot;
    if (p > 1e-300) out -= p * std::log2(p);
  }
  return out;
}

// I_{A:B} = S(rho_A) + S(rho_B) - S(rho), in bits.
inline double dense_qmi(const DenseOperator& rho, int n_a) {
  detail::check_cut(rho.n, n_a);
  return von_neumann_entropy(partial_trace_keep_left(rho.matrix, rho.n, n_a)) +
         von_neumann_entropy(partial_trace_keep_right(rho.matrix, rho.n, n_a)) -
         von_neumann_entropy(rho.matrix);
}

struct DenseEntropies {
  double s_a = 0.0, s_b = 0.0, s_total = 0.0, qmi = 0.0;
};

inline DenseEntropies dense_entropies(const DenseOperator& rho, int n_a) {
  detail::check_cut(rho.n, n_a);
  DenseEntropies out;
  out.s_a = von_neumann_entropy(partial_trace_keep_left(rho.matrix, rho.n, n_a));
  out.s_b = von_neumann_entropy(partial_trace_keep_right(rho.matrix, rho.n, n_a));
  out.s_total = von_neumann_entropy(rho.matrix);
  out.qmi = out.s_a + out.s_b - out.s_total;
  return out;
}

inline double purity(const CMatrix& rho) { return (rho * rho).trace().real(); }

// I_P = log2[ P(rho) / (P(rho_A) P(rho_B)) ] with P(sigma) = tr sigma^2.
inline double dense_mutual_purity(const DenseOperator& rho, int n_a) {
  detail::check_cut(rho.n, n_a);
  const double p = purity(rho.matrix);
  const double pa = purity(partial_trace_keep_left(rho.matrix, rho.n, n_a));
  const double pb = purity(partial_trace_keep_right(rho.matrix, rho.n, n_a));
  return std::log2(p) - std::log2(pa) - std::log2(pb);
}

// Pauli coefficients c_s = 2^-n tr(sigma^s rho), site-0-major string index
// (s of site 0 is the most significant base-4 digit). Real for Hermitian rho.
inline Vector pauli_coefficients(const DenseOperator& rho) {
  detail::check_capacity(rho.n);
  const int n = rho.n;
  const Eigen::Index d4 = Eigen::Index{1} << (2 * n);
  // Work tensor indexed by mixed digits: sites already transformed carry a
  // base-4 Pauli digit, the rest carry the (bra,ket) bit pair of rho.
  std::vector<std::complex<double>> cur(d4), nxt(d4);
  {  // load rho as bit-pair tensor: index = sum_m (i_m*2+j_m) * 4^{n-1-m}
    const Eigen::Index dim = detail::pow2(n);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) {
        Eigen::Index idx = 0;
        for (int m = 0; m < n; ++m) {
          const int im = (i >> (n - 1 - m)) & 1;
          const int jm = (j >> (n - 1 - m)) & 1;
          idx = idx * 4 + (im * 2 + jm);
        }
        cur[idx] = rho.matrix(i, j);
      }
  }
  // Per-site change of basis B[s][(i,j)] = sigma^s(j,i) / 2.
  std::complex<double> B[4][4];
  for (int s = 0; s < 4; ++s)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) B[s][i * 2 + j] = pauli(s)(j, i) / 2.0;
  Eigen::Index stride_hi = 1;  // digits above site m
  for (int m = 0; m < n; ++m) {
    const Eigen::Index stride_lo = d4 / (stride_hi * 4);
    for (Eigen::Index hi = 0; hi < stride_hi; ++hi)
      for (Eigen::Index lo = 0; lo < stride_lo; ++lo) {
        const Eigen::Index base = hi * 4 * stride_lo + lo;
        for (int s = 0; s < 4; ++s) {
          std::complex<double> acc = 0.0;
          for (int q = 0; q < 4; ++q) acc += B[s][q] * cur[base + q * stride_lo];
          nxt[base + s * stride_lo] = acc;
        }
      }
    std::swap(cur, nxt);
    stride_hi *= 4;
  }
  Vector out(d4);
  for (Eigen::Index i = 0; i < d4; ++i) {
    if (std::abs(cur[i].imag()) > 1e-10)
      throw std::runtime_error("pauli_coefficients: operator is not Hermitian");
    out(i) = cur[i].real();
  }
  return out;
}

}  // namespace spinchain
