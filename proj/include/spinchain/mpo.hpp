#pragma once

// Matrix-product representation of a density operator over the Pauli string
// basis {1, sx, sy, sz}^n with inner product <x|y> = 2^-n tr(x^dag y), evolved
// in imaginary time by Trotterized half-step conjugation with SVD truncation.
//
// Pauli coefficients of a Hermitian operator are real, so tensors are real.
// The represented coefficients are c_s = (tensor contraction) * e^{log_prefactor};
// after each renormalization the trace is pinned to 1 (c_{0..0} 2^n = 1) and
// the bare contraction has unit 2-norm.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinchain/linalg.hpp"
#include "spinchain/models.hpp"

namespace spinchain {

struct TruncationPolicy {
  int d_max = 128;
  double svd_cut = 1e-10;  // drop singular values below svd_cut * largest
};

struct StepReport {
  double discarded_weight = 0.0;  // sum over gates of discarded sigma^2 fraction
  int max_bond = 1;
};

// Two-site conjugation gates rho -> K rho K, K = exp(-tau h/2), as 16x16
// matrices on the two-site Pauli coefficient space. Odd bonds (first, third,
// ... in 1-based counting) carry half-step gates (tau = eps/2), even bonds
// full-step gates (tau = eps); one composite step is odd-half, even, odd-half.
struct GateSet {
  int n = 0;
  double epsilon = 0.0;
  std::vector<Matrix> odd_half;   // indexed by 0-based bond, populated for even indices
  std::vector<Matrix> even_full;  // populated for odd indices
};

namespace detail {

inline const Matrix4cd& two_site_pauli(int p) {
  static const std::array<Matrix4cd, 16> basis = [] {
    std::array<Matrix4cd, 16> b;
    for (int s1 = 0; s1 < 4; ++s1)
      for (int s2 = 0; s2 < 4; ++s2) b[s1 * 4 + s2] = kron(pauli(s1), pauli(s2)).eval();
    return b;
  }();
  return basis[p];
}

// 16x16 coefficient-space matrix of rho -> K rho K with K = exp(-tau h / 2).
inline Matrix conjugation_gate(const Matrix4cd& h, double tau) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("conjugation_gate: eigensolve failed");
  Eigen::Vector4d w = es.eigenvalues();
  Eigen::Vector4cd e;
  for (int i = 0; i < 4; ++i) e(i) = std::exp(-tau * w(i) / 2.0);
  const Matrix4cd k = es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
  Matrix g(16, 16);
  for (int p = 0; p < 16; ++p) {
    const Matrix4cd pk = two_site_pauli(p) * k;
    for (int q = 0; q < 16; ++q) {
      const std::complex<double> v = (pk * two_site_pauli(q) * k).trace() / 4.0;
      if (std::abs(v.imag()) > 1e-12)
        throw std::runtime_error("conjugation_gate: non-real coefficient map");
      g(p, q) = v.real();
    }
  }
  return g;
}

}  // namespace detail

// Builds the Trotter gate layers for one composite step of size epsilon.
// Single-site fields are split half-and-half onto the adjacent bonds, with
// full weight at the chain ends.
inline GateSet build_gates(const TermList& terms, double epsilon) {
  if (terms.n < 2) throw std::invalid_argument("build_gates: need at least one bond (n >= 2)");
  if (epsilon <= 0.0) throw std::domain_error("build_gates: epsilon must be positive");
  const int n = terms.n;
  std::vector<Matrix4cd> bond_h(n - 1, Matrix4cd::Zero());
  std::vector<Matrix2cd> site_h(n, Matrix2cd::Zero());
  for (const auto& b : terms.bonds) bond_h.at(b.site) += b.op;
  for (const auto& s : terms.sites) site_h.at(s.site) += s.op;
  GateSet gates;
  gates.n = n;
  gates.epsilon = epsilon;
  gates.odd_half.resize(n - 1);
  gates.even_full.resize(n - 1);
  const Matrix2cd id = Matrix2cd::Identity();
  for (int l = 0; l + 1 < n; ++l) {
    const double wl = (l == 0) ? 1.0 : 0.5;
    const double wr = (l + 1 == n - 1) ? 1.0 : 0.5;
    const Matrix4cd h = bond_h[l] + wl * kron(site_h[l], id) + wr * kron(id, site_h[l + 1]);
    if (l % 2 == 0)
      gates.odd_half[l] = detail::conjugation_gate(h, epsilon / 2.0);
    else
      gates.even_full[l] = detail::conjugation_gate(h, epsilon);
  }
  return gates;
}

class OperatorMPS {
 public:
  // rho(0) = 1/2^n: bond dimension 1, coefficient 2^-n on the all-identity
  // string (1/2 per site), zero elsewhere.
  static OperatorMPS infinite_temperature(int n) {
    if (n < 1) throw std::invalid_argument("OperatorMPS: n must be >= 1");
    OperatorMPS st;
    st.n_ = n;
    st.a_.resize(n);
    for (auto& site : st.a_)
      for (int s = 0; s < 4; ++s) site[s] = Matrix::Constant(1, 1, s == 0 ? 0.5 : 0.0);
    st.log_prefactor_ = 0.0;
    st.center_ = 0;
    return st;
  }

  int n() const { return n_; }
  double log_prefactor() const { return log_prefactor_; }
  int center() const { return center_; }
  const std::array<Matrix, 4>& site(int m) const { return a_.at(m); }

  int max_bond_dim() const {
    int d = 1;
    for (const auto& site : a_) d = std::max(d, static_cast<int>(site[0].cols()));
    return d;
  }

  // One composite imaginary-time step beta -> beta + epsilon: odd half-layer
  // left to right, even layer right to left, odd half-layer again, then trace
  // renormalization. The sweeps keep the state in mixed-canonical form, so
  // every truncation happens at an orthogonality center.
  StepReport evolve_step(const GateSet& gates, const TruncationPolicy& policy) {
    if (gates.n != n_) throw std::invalid_argument("evolve_step: gate set size mismatch");
    StepReport rep;
    for (int l = 0; l + 1 < n_; l += 2) {
      center_to(l);
      rep.discarded_weight += apply_gate(l, gates.odd_half[l], policy, true);
    }
    for (int l = ((n_ - 2) % 2 == 1) ? n_ - 2 : n_ - 3; l >= 1; l -= 2) {
      center_to(l + 1);
      rep.discarded_weight += apply_gate(l, gates.even_full[l], policy, false);
    }
    for (int l = 0; l + 1 < n_; l += 2) {
      center_to(l);
      rep.discarded_weight += apply_gate(l, gates.odd_half[l], policy, true);
    }
    renormalize();
    rep.max_bond = max_bond_dim();
    return rep;
  }

  // Applies a 16x16 coefficient-space gate to bond (l, l+1) and truncates.
  // Returns the discarded sigma^2 fraction. The orthogonality center must sit
  // on one of the two sites; it ends on l+1 (move_right) or l (otherwise).
  double apply_gate(int l, const Matrix& gate, const TruncationPolicy& policy, bool move_right) {
    if (l < 0 || l + 1 >= n_) throw std::invalid_argument("apply_gate: bond out of range");
    if (center_ != l && center_ != l + 1)
      throw std::logic_error("apply_gate: orthogonality center away from bond");
    const Eigen::Index dl = a_[l][0].rows();
    const Eigen::Index dr = a_[l + 1][0].cols();
    Matrix theta(4 * dl, 4 * dr);
    for (int s1 = 0; s1 < 4; ++s1)
      for (int s2 = 0; s2 < 4; ++s2)
        theta.block(s1 * dl, s2 * dr, dl, dr).noalias() = a_[l][s1] * a_[l + 1][s2];
    Matrix gated = Matrix::Zero(4 * dl, 4 * dr);
    for (int p = 0; p < 16; ++p)
      for (int q = 0; q < 16; ++q) {
        const double c = gate(p, q);
        if (c == 0.0) continue;
        gated.block((p / 4) * dl, (p % 4) * dr, dl, dr) +=
            c * theta.block((q / 4) * dl, (q % 4) * dr, dl, dr);
      }
    auto svd = linalg::svd(gated);
    const double total = svd.s.squaredNorm();
    if (!(svd.s(0) > 0.0)) throw std::runtime_error("apply_gate: state degenerated to zero");
    Eigen::Index keep = 0;
    while (keep < svd.s.size() && svd.s(keep) >= policy.svd_cut * svd.s(0) &&
           keep < policy.d_max)
      ++keep;
    keep = std::max<Eigen::Index>(keep, 1);
    const double kept = svd.s.head(keep).squaredNorm();
    const double discarded = (total - kept) / total;
    if (move_right) {
      const Matrix sv = svd.s.head(keep).asDiagonal() * svd.vt.topRows(keep);
      for (int s = 0; s < 4; ++s) {
        a_[l][s] = svd.u.block(s * dl, 0, dl, keep);
        a_[l + 1][s] = sv.middleCols(s * dr, dr);
      }
      center_ = l + 1;
    } else {
      const Matrix us = svd.u.leftCols(keep) * svd.s.head(keep).asDiagonal();
      for (int s = 0; s < 4; ++s) {
        a_[l][s] = us.block(s * dl, 0, dl, keep);
        a_[l + 1][s] = svd.vt.block(0, s * dr, keep, dr);
      }
      center_ = l;
    }
    return discarded;
  }

  // Full left-to-right then right-to-left gauge sweep; the represented
  // operator is unchanged.
  void reorthogonalize() {
    center_to(n_ - 1);
    center_to(0);
  }

  // Schmidt entropy of the super-ket at the bond between sites n_a-1 and n_a,
  // in bits. Gauges about the cut first.
  double osee(int n_a) {
    if (n_a < 1 || n_a >= n_) throw std::invalid_argument("osee: cut must satisfy 1 <= n_A < n");
    center_to(n_a - 1);
    const Eigen::Index dl = a_[n_a - 1][0].rows();
    const Eigen::Index dr = a_[n_a - 1][0].cols();
    Matrix m(4 * dl, dr);
    for (int s = 0; s < 4; ++s) m.middleRows(s * dl, dl) = a_[n_a - 1][s];
    const Vector sv = linalg::svd(m).s;
    const double total = sv.squaredNorm();
    if (total <= 0.0) throw std::runtime_error("osee: zero state");
    double out = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      const double p = sv(i) * sv(i) / total;
      if (p > 1e-300) out -= p * std::log2(p);
    }
    return out;
  }

  // Trace of the represented operator (exact contraction, log-scaled).
  double trace() const {
    const auto [lg, sign] = trace_log();
    return sign * std::exp(lg + log_prefactor_);
  }

  // log2 of P = tr rho^2 = 2^n <rho|rho>.
  double purity_log2() const {
    return (norm2_log() + 2.0 * log_prefactor_) / std::numbers::ln2 + n_;
  }
  double purity() const { return std::exp2(purity_log2()); }

  // I_P = log2[P(rho) / (P(rho_A) P(rho_B))] for A = sites [0, n_a). The
  // partial trace over a region projects its tensors onto the identity
  // component, scaled by 2 per site.
  double mutual_purity(int n_a) const {
    if (n_a < 1 || n_a >= n_)
      throw std::invalid_argument("mutual_purity: cut must satisfy 1 <= n_A < n");
    const double ln_p = norm2_log() + n_ * std::numbers::ln2;
    const double ln_pa = projected_norm2_log(0, n_a) + n_a * std::numbers::ln2;
    const double ln_pb = projected_norm2_log(n_a, n_) + (n_ - n_a) * std::numbers::ln2;
    return (ln_p - ln_pa - ln_pb - 2.0 * log_prefactor_) / std::numbers::ln2;
  }

  // All 4^n Pauli coefficients, site-0-major. Small n only.
  Vector coefficients() const {
    if (n_ > 10) throw std::runtime_error("coefficients: reconstruction capped at n <= 10");
    Matrix table = Matrix::Ones(1, 1);
    for (int m = 0; m < n_; ++m) {
      const Eigen::Index rows = table.rows();
      const Eigen::Index dr = a_[m][0].cols();
      Matrix next(rows * 4, dr);
      for (int s = 0; s < 4; ++s) {
        const Matrix part = table * a_[m][s];
        for (Eigen::Index r = 0; r < rows; ++r) next.row(r * 4 + s) = part.row(r);
      }
      table = std::move(next);
    }
    return table.col(0) * std::exp(log_prefactor_);
  }

  std::vector<int> bond_dims() const {
    std::vector<int> d;
    for (int m = 0; m + 1 < n_; ++m) d.push_back(static_cast<int>(a_[m][0].cols()));
    return d;
  }

  void center_to(int m) {
    if (m < 0 || m >= n_) throw std::invalid_argument("center_to: site out of range");
    while (center_ < m) move_center_right();
    while (center_ > m) move_center_left();
  }

  // Renormalizes to unit contraction 2-norm and trace 1 (the scale moves into
  // the log prefactor).
  void renormalize() {
    center_to(0);
    double nrm2 = 0.0;
    for (int s = 0; s < 4; ++s) nrm2 += a_[0][s].squaredNorm();
    const double nrm = std::sqrt(nrm2);
    if (!(nrm > 0.0)) throw std::runtime_error("renormalize: zero state");
    for (int s = 0; s < 4; ++s) a_[0][s] /= nrm;
    const auto [lt, sign] = trace_log();
    if (sign <= 0.0) throw std::runtime_error("renormalize: non-positive trace");
    log_prefactor_ = -lt;
  }

  friend void save_checkpoint(const OperatorMPS& state, double beta, const std::string& path);
  friend struct CheckpointLoader;

 private:
  void move_center_right() {
    const int c = center_;
    const Eigen::Index dl = a_[c][0].rows(), dr = a_[c][0].cols();
    Matrix m(4 * dl, dr);
    for (int s = 0; s < 4; ++s) m.middleRows(s * dl, dl) = a_[c][s];
    auto [q, r] = linalg::qr(m);
    const Eigen::Index k = q.cols();
    for (int s = 0; s < 4; ++s) a_[c][s] = q.block(s * dl, 0, dl, k);
    for (int s = 0; s < 4; ++s) a_[c + 1][s] = (r * a_[c + 1][s]).eval();
    ++center_;
  }

  void move_center_left() {
    const int c = center_;
    const Eigen::Index dl = a_[c][0].rows(), dr = a_[c][0].cols();
    Matrix m(dl, 4 * dr);
    for (int s = 0; s < 4; ++s) m.middleCols(s * dr, dr) = a_[c][s];
    auto [lmat, q] = linalg::lq(m);
    const Eigen::Index k = q.rows();
    for (int s = 0; s < 4; ++s) a_[c][s] = q.block(0, s * dr, k, dr);
    for (int s = 0; s < 4; ++s) a_[c - 1][s] = (a_[c - 1][s] * lmat).eval();
    --center_;
  }

  // ln |2^n c~_{0..0}| of the bare contraction, with sign.
  std::pair<double, double> trace_log() const {
    Eigen::RowVectorXd t = Eigen::RowVectorXd::Ones(1);
    double acc = 0.0;
    for (int m = 0; m < n_; ++m) {
      t = (t * (2.0 * a_[m][0])).eval();
      const double s = t.cwiseAbs().maxCoeff();
      if (!(s > 0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
      t /= s;
      acc += std::log(s);
    }
    return {acc + std::log(std::abs(t(0))), t(0) >= 0.0 ? 1.0 : -1.0};
  }

  // ln sum_s c~_s^2 of the bare contraction.
  double norm2_log() const {
    Matrix e = Matrix::Ones(1, 1);
    double acc = 0.0;
    for (int m = 0; m < n_; ++m) {
      Matrix next = Matrix::Zero(a_[m][0].cols(), a_[m][0].cols());
      for (int s = 0; s < 4; ++s) next.noalias() += a_[m][s].transpose() * e * a_[m][s];
      e = std::move(next);
      const double sc = e.cwiseAbs().maxCoeff();
      if (!(sc > 0.0)) return -std::numeric_limits<double>::infinity();
      e /= sc;
      acc += std::log(sc);
    }
    return acc + std::log(e(0, 0));
  }

  // ln of sum over Pauli strings with identity outside [lo, hi), each outside
  // site contributing its traced weight (2 * identity slice)^2.
  double projected_norm2_log(int lo, int hi) const {
    Matrix e = Matrix::Ones(1, 1);
    double acc = 0.0;
    for (int m = 0; m < n_; ++m) {
      Matrix next;
      if (m >= lo && m < hi) {
        next = Matrix::Zero(a_[m][0].cols(), a_[m][0].cols());
        for (int s = 0; s < 4; ++s) next.noalias() += a_[m][s].transpose() * e * a_[m][s];
      } else {
        const Matrix t = 2.0 * a_[m][0];
        next.noalias() = t.transpose() * e * t;
      }
      e = std::move(next);
      const double sc = e.cwiseAbs().maxCoeff();
      if (!(sc > 0.0)) return -std::numeric_limits<double>::infinity();
      e /= sc;
      acc += std::log(sc);
    }
    return acc + std::log(e(0, 0));
  }

  int n_ = 0;
  std::vector<std::array<Matrix, 4>> a_;
  double log_prefactor_ = 0.0;
  int center_ = 0;
};

// ---- checkpointing ----------------------------------------------------
// Self-describing little-endian binary dump of tensors, log prefactor, gauge
// center and the beta reached; round-trips bit-exactly.

namespace detail {
inline constexpr char kCheckpointMagic[8] = {'S', 'C', 'M', 'P', 'O', '1', '\n', '\0'};

template <class T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T read_pod(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return v;
}
}  // namespace detail

inline void save_checkpoint(const OperatorMPS& state, double beta, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  os.write(detail::kCheckpointMagic, sizeof(detail::kCheckpointMagic));
  detail::write_pod(os, std::int32_t{1});
  detail::write_pod(os, static_cast<std::int32_t>(state.n_));
  detail::write_pod(os, static_cast<std::int32_t>(state.center_));
  detail::write_pod(os, state.log_prefactor_);
  detail::write_pod(os, beta);
  for (const auto& site : state.a_) {
    detail::write_pod(os, static_cast<std::int32_t>(site[0].rows()));
    detail::write_pod(os, static_cast<std::int32_t>(site[0].cols()));
    for (int s = 0; s < 4; ++s)
      os.write(reinterpret_cast<const char*>(site[s].data()),
               static_cast<std::streamsize>(sizeof(double) * site[s].size()));
  }
  if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

struct CheckpointLoader {
  static std::pair<OperatorMPS, double> load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::string(magic, 6) != "SCMPO1")
      throw std::runtime_error("checkpoint: bad magic in " + path);
    const auto version = detail::read_pod<std::int32_t>(is);
    if (version != 1) throw std::runtime_error("checkpoint: unsupported version");
    OperatorMPS st;
    st.n_ = detail::read_pod<std::int32_t>(is);
    st.center_ = detail::read_pod<std::int32_t>(is);
    st.log_prefactor_ = detail::read_pod<double>(is);
    const double beta = detail::read_pod<double>(is);
    if (st.n_ < 1 || st.center_ < 0 || st.center_ >= st.n_)
      throw std::runtime_error("checkpoint: corrupt header");
    st.a_.resize(st.n_);
    for (auto& site : st.a_) {
      const auto rows = detail::read_pod<std::int32_t>(is);
      const auto cols = detail::read_pod<std::int32_t>(is);
      if (rows < 1 || cols < 1) throw std::runtime_error("checkpoint: corrupt tensor shape");
      for (int s = 0; s < 4; ++s) {
        site[s].resize(rows, cols);
        is.read(reinterpret_cast<char*>(site[s].data()),
                static_cast<std::streamsize>(sizeof(double) * site[s].size()));
        if (!is) throw std::runtime_error("checkpoint: truncated tensors");
      }
    }
    return {std::move(st), beta};
  }
};

inline std::pair<OperatorMPS, double> load_checkpoint(const std::string& path) {
  return CheckpointLoader::load(path);
}

}  // namespace spinchain
