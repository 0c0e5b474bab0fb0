#pragma once

// Thin LAPACKE wrappers over Eigen containers. All heavy factorizations
// (SVD, Hermitian eigensolves, thin QR) go through these; Eigen is used
// for storage and matrix products.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <stdexcept>

#include <lapacke.h>

namespace spinchain {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

namespace linalg {

struct SvdResult {
  Matrix u;   // m x k
  Vector s;   // k, descending
  Matrix vt;  // k x n
};

// Thin SVD via dgesdd (divide and conquer).
inline SvdResult svd(const Matrix& m) {
  const auto rows = static_cast<lapack_int>(m.rows());
  const auto cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  Matrix a = m;  // overwritten
  SvdResult out;
  out.u.resize(rows, k);
  out.s.resize(k);
  out.vt.resize(k, cols);
  const lapack_int info =
      LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, a.data(), rows,
                     out.s.data(), out.u.data(), rows, out.vt.data(), k);
  if (info != 0) throw std::runtime_error("linalg::svd: dgesdd failed, info=" + std::to_string(info));
  return out;
}

struct CSvdResult {
  CMatrix u;
  Vector s;  // descending
  CMatrix vt;
};

// Thin complex SVD via zgesdd.
inline CSvdResult svd(const CMatrix& m) {
  const auto rows = static_cast<lapack_int>(m.rows());
  const auto cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  CMatrix a = m;
  CSvdResult out;
  out.u.resize(rows, k);
  out.s.resize(k);
  out.vt.resize(k, cols);
  const lapack_int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, 'S', rows, cols,
      reinterpret_cast<lapack_complex_double*>(a.data()), rows, out.s.data(),
      reinterpret_cast<lapack_complex_double*>(out.u.data()), rows,
      reinterpret_cast<lapack_complex_double*>(out.vt.data()), k);
  if (info != 0) throw std::runtime_error("linalg::svd: zgesdd failed, info=" + std::to_string(info));
  return out;
}

struct HermitianEigen {
  Vector values;  // ascending
  CMatrix vectors;
};

// Full eigensystem of a complex Hermitian matrix via zheevd.
inline HermitianEigen eigh(const CMatrix& h) {
  const auto n = static_cast<lapack_int>(h.rows());
  HermitianEigen out;
  out.vectors = h;
  out.values.resize(n);
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', n,
      reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n,
      out.values.data());
  if (info != 0) throw std::runtime_error("linalg::eigh: zheevd failed, info=" + std::to_string(info));
  return out;
}

struct SymmetricEigen {
  Vector values;  // ascending
  Matrix vectors;
};

inline SymmetricEigen eigh(const Matrix& s) {
  const auto n = static_cast<lapack_int>(s.rows());
  SymmetricEigen out;
  out.vectors = s;
  out.values.resize(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         out.vectors.data(), n, out.values.data());
  if (info != 0) throw std::runtime_error("linalg::eigh: dsyevd failed, info=" + std::to_string(info));
  return out;
}

struct QrResult {
  Matrix q;  // m x k
  Matrix r;  // k x n, upper trapezoidal
};

// Thin QR via dgeqrf + dorgqr.
inline QrResult qr(const Matrix& m) {
  const auto rows = static_cast<lapack_int>(m.rows());
  const auto cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  Matrix a = m;
  Vector tau(k);
  lapack_int info = LAPACKE_dgeqrf(LAPACK_COL_MAJOR, rows, cols, a.data(), rows, tau.data());
  if (info != 0) throw std::runtime_error("linalg::qr: dgeqrf failed");
  QrResult out;
  out.r = Matrix::Zero(k, cols);
  for (lapack_int j = 0; j < cols; ++j)
    for (lapack_int i = 0; i <= std::min<lapack_int>(j, k - 1); ++i) out.r(i, j) = a(i, j);
  info = LAPACKE_dorgqr(LAPACK_COL_MAJOR, rows, k, k, a.data(), rows, tau.data());
  if (info != 0) throw std::runtime_error("linalg::qr: dorgqr failed");
  out.q = a.leftCols(k);
  return out;
}

struct LqResult {
  Matrix l;  // m x k, lower trapezoidal
  Matrix q;  // k x n
};

inline LqResult lq(const Matrix& m) {
  const QrResult qrt = qr(m.transpose());
  return {qrt.r.transpose(), qrt.q.transpose()};
}

}  // namespace linalg
}  // namespace spinchain
