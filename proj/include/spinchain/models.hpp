#pragma once

// Hamiltonian families of 1D spin-1/2 chains with open boundaries:
//   XY:          sum_l [(1+g)/2 sx sx + (1-g)/2 sy sy] + sum_l h sz
//   TiltedIsing: sum_l sx sx + sum_l (hx sx + hz sz)
//   XXZField:    sum_l (sx sx + sy sy + delta sz sz) + sum_l h_l sz
// plus the Majorana quadratic form of the XY family and per-site/per-bond
// term lists consumed by the MPO engine and the dense reference.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinchain/linalg.hpp"

namespace spinchain {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;

inline const Matrix2cd& pauli(int s) {
  using namespace std::complex_literals;
  static const Matrix2cd mats[4] = {
      (Matrix2cd() << 1, 0, 0, 1).finished(),
      (Matrix2cd() << 0, 1, 1, 0).finished(),
      (Matrix2cd() << 0, -1i, 1i, 0).finished(),
      (Matrix2cd() << 1, 0, 0, -1).finished(),
  };
  if (s < 0 || s > 3) throw std::invalid_argument("pauli: index out of range");
  return mats[s];
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

enum class Family { XY, TiltedIsing, XXZField };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::XY: return "xy";
    case Family::TiltedIsing: return "tilted_ising";
    case Family::XXZField: return "xxz";
  }
  throw std::logic_error("family_name: bad enum");
}

// Parameters of one chain. Only the fields of the chosen family are read.
struct ChainSpec {
  Family family = Family::XY;
  int n = 1;
  double gamma = 0.0, h = 0.0;  // XY
  double hx = 0.0, hz = 0.0;    // tilted Ising
  double delta = 0.0;           // XXZ
  std::vector<double> h_l;      // XXZ per-site fields; empty means all zero

  static ChainSpec xy(int n, double gamma, double h) {
    ChainSpec s;
    s.family = Family::XY;
    s.n = n;
    s.gamma = gamma;
    s.h = h;
    s.validate();
    return s;
  }
  static ChainSpec tilted_ising(int n, double hx, double hz) {
    ChainSpec s;
    s.family = Family::TiltedIsing;
    s.n = n;
    s.hx = hx;
    s.hz = hz;
    s.validate();
    return s;
  }
  static ChainSpec xxz(int n, double delta, std::vector<double> h_l = {}) {
    ChainSpec s;
    s.family = Family::XXZField;
    s.n = n;
    s.delta = delta;
    s.h_l = std::move(h_l);
    s.validate();
    return s;
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("ChainSpec: n must be >= 1");
    if (family == Family::XXZField && !h_l.empty() && static_cast<int>(h_l.size()) != n)
      throw std::invalid_argument("ChainSpec: h_l length must equal n");
  }

  double field_at(int site) const {  // XXZ per-site field, 0-based
    return h_l.empty() ? 0.0 : h_l.at(site);
  }
};

// Staggered field -(1+(-1)^l)/2 for sites l = 1..n: 0, -1, 0, -1, ...
inline std::vector<double> staggered_field(int n) {
  std::vector<double> f(n);
  for (int l = 1; l <= n; ++l) f[l - 1] = -(1.0 + ((l % 2 == 0) ? 1.0 : -1.0)) / 2.0;
  return f;
}

// Coefficient matrix of the quadratic Majorana form H = sum_{jl} H_jl w_j w_l.
// Antisymmetric and Hermitian, hence purely imaginary.
struct MajoranaForm {
  int n = 0;
  CMatrix h;  // 2n x 2n
};

// Bond/site decomposition of the Hamiltonian in the computational basis.
// Summing all terms embedded at their sites reproduces the dense Hamiltonian.
struct TermList {
  struct Bond {
    int site;      // acts on (site, site+1), 0-based
    Matrix4cd op;  // Hermitian
  };
  struct Site {
    int site;
    Matrix2cd op;  // Hermitian
  };
  int n = 0;
  std::vector<Bond> bonds;
  std::vector<Site> sites;
};

// Majorana representation of the XY family,
//   H_XY = -i sum_l [(1+g)/2 w_{2l} w_{2l+1} - (1-g)/2 w_{2l-1} w_{2l+2}]
//          -i sum_l h w_{2l-1} w_{2l}            (1-based w indices),
// with the convention that a monomial -i*a*w_j w_l (j < l) contributes
// H_jl = -i a/2 and H_lj = +i a/2.
inline MajoranaForm build_majorana_form(const ChainSpec& spec) {
  if (spec.family != Family::XY)
    throw std::invalid_argument("build_majorana_form: spec is not an XY chain");
  const int n = spec.n;
  MajoranaForm form;
  form.n = n;
  form.h = CMatrix::Zero(2 * n, 2 * n);
  auto add = [&form](int j, int l, double a) {  // 0-based, j < l
    form.h(j, l) += std::complex<double>(0.0, -a / 2.0);
    form.h(l, j) += std::complex<double>(0.0, a / 2.0);
  };
  for (int l = 0; l + 1 < n; ++l) {
    add(2 * l + 1, 2 * l + 2, (1.0 + spec.gamma) / 2.0);
    add(2 * l, 2 * l + 3, -(1.0 - spec.gamma) / 2.0);
  }
  for (int l = 0; l < n; ++l) add(2 * l, 2 * l + 1, spec.h);
  return form;
}

// Bond and site terms of Eq-style couplings for any family. Single-site
// fields are returned as site terms; the MPO engine decides how to absorb
// them into bond gates.
inline TermList build_term_list(const ChainSpec& spec) {
  spec.validate();
  TermList terms;
  terms.n = spec.n;
  const Matrix4cd xx = kron(pauli(1), pauli(1));
  const Matrix4cd yy = kron(pauli(2), pauli(2));
  const Matrix4cd zz = kron(pauli(3), pauli(3));
  for (int l = 0; l + 1 < spec.n; ++l) {
    Matrix4cd op;
    switch (spec.family) {
      case Family::XY:
        op = (1.0 + spec.gamma) / 2.0 * xx + (1.0 - spec.gamma) / 2.0 * yy;
        break;
      case Family::TiltedIsing:
        op = xx;
        break;
      case Family::XXZField:
        op = xx + yy + spec.delta * zz;
        break;
    }
    terms.bonds.push_back({l, op});
  }
  for (int l = 0; l < spec.n; ++l) {
    Matrix2cd op;
    switch (spec.family) {
      case Family::XY:
        op = spec.h * pauli(3);
        break;
      case Family::TiltedIsing:
        op = spec.hx * pauli(1) + spec.hz * pauli(3);
        break;
      case Family::XXZField:
        op = spec.field_at(l) * pauli(3);
        break;
    }
    if (op.cwiseAbs().maxCoeff() > 0.0) terms.sites.push_back({l, op});
  }
  return terms;
}

}  // namespace spinchain
