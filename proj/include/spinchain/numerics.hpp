#pragma once

// Shared numerical kernels: binary entropy, spectra of real antisymmetric
// matrices, overflow-safe hyperbolics, and least-squares fits on log2 axes.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spinchain/linalg.hpp"

namespace spinchain {

inline constexpr double kAntisymmetryTol = 1e-10;  // contract tolerance for inputs
inline constexpr double kNuExcursionTol = 1e-9;    // allowed eigenvalue overshoot above 1
inline constexpr double kEntropyArgTol = 1e-9;     // binary_entropy domain slack

// Real antisymmetric matrix (entries[p][q] = -entries[q][p]). Construction
// checks the contract; principal sub-blocks stay antisymmetric.
class AntisymmetricMatrix {
 public:
  explicit AntisymmetricMatrix(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols())
      throw std::invalid_argument("AntisymmetricMatrix: matrix not square");
    const double dev = (m_ + m_.transpose()).cwiseAbs().maxCoeff();
    if (dev > kAntisymmetryTol)
      throw std::invalid_argument("AntisymmetricMatrix: antisymmetry violated by " +
                                  std::to_string(dev));
  }

  const Matrix& entries() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

  // Principal sub-block on index range [offset, offset+size).
  AntisymmetricMatrix block(Eigen::Index offset, Eigen::Index size) const {
    if (offset < 0 || size < 0 || offset + size > dim())
      throw std::invalid_argument("AntisymmetricMatrix::block: range out of bounds");
    return AntisymmetricMatrix(m_.block(offset, offset, size, size));
  }

 private:
  Matrix m_;
};

// Nonnegative halves nu_j of the paired eigenvalues +-i nu_j, descending,
// clamped into [0,1]. Only meaningful for correlation-type matrices.
struct NuSpectrum {
  std::vector<double> values;
};

// H2(x) = -x log2 x - (1-x) log2(1-x), in bits. Inputs within
// kEntropyArgTol of [0,1] are clamped; anything farther is a domain error.
inline double binary_entropy(double x) {
  if (x < -kEntropyArgTol || x > 1.0 + kEntropyArgTol)
    throw std::domain_error("binary_entropy: argument " + std::to_string(x) + " outside [0,1]");
  x = std::clamp(x, 0.0, 1.0);
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// Eigenvalues of a real antisymmetric matrix come in pairs +-i nu. Returns
// the dim/2 nonnegative nu_j in descending order, via Hermitian
// diagonalization of i*m. Values must lie in [0, 1 + kNuExcursionTol].
inline NuSpectrum antisymmetric_spectrum(const AntisymmetricMatrix& m) {
  const Eigen::Index d = m.dim();
  if (d % 2 != 0) throw std::invalid_argument("antisymmetric_spectrum: odd dimension");
  NuSpectrum out;
  if (d == 0) return out;
  const CMatrix herm = std::complex<double>(0.0, 1.0) * m.entries();
  const Vector w = linalg::eigh(herm).values;  // ascending, paired -nu..+nu
  out.values.reserve(d / 2);
  for (Eigen::Index i = d - 1; i >= d / 2; --i) {
    double nu = w(i);
    if (nu > 1.0 + kNuExcursionTol)
      throw std::domain_error("antisymmetric_spectrum: eigenvalue " + std::to_string(nu) +
                              " exceeds 1; not a correlation matrix");
    out.values.push_back(std::clamp(nu, 0.0, 1.0));
  }
  return out;
}

// 1/cosh(x) without overflow, valid for any real x.
inline double stable_sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

// Ordinary least squares of y against x. Needs >= 2 points.
inline LinearFit line_fit(std::span<const double> x, std::span<const double> y) {
  const size_t m = x.size();
  if (m < 2 || y.size() != m) throw std::invalid_argument("line_fit: need >= 2 paired points");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("line_fit: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (size_t i = 0; i < m; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / m);
  return fit;
}

struct LogLawFit {
  double c = 0.0;        // 3 * slope of S vs log2(beta)
  double c_prime = 0.0;  // intercept
  double rms_residual = 0.0;
};

// Least-squares fit of S = (c/3) log2(beta) + c' over points whose beta lies
// inside [window_lo, window_hi]. Fewer than 3 in-window points is an error.
inline LogLawFit fit_log_law(std::span<const std::pair<double, double>> points,
                             double window_lo, double window_hi) {
  std::vector<double> x, y;
  for (const auto& [beta, s] : points) {
    if (beta <= 0.0) throw std::domain_error("fit_log_law: beta must be positive");
    if (beta >= window_lo && beta <= window_hi) {
      x.push_back(std::log2(beta));
      y.push_back(s);
    }
  }
  if (x.size() < 3)
    throw std::invalid_argument("fit_log_law: fewer than 3 points inside the window");
  const LinearFit fit = line_fit(x, y);
  return {3.0 * fit.slope, fit.intercept, fit.rms_residual};
}

}  // namespace spinchain
