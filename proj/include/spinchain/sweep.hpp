#pragma once

// Batch experiment runner: sweeps (model, n, beta, D, eps) grids across the
// three engines, writes plot-ready CSV, and runs the log-law / gap-law fits.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spinchain/freefermion.hpp"
#include "spinchain/models.hpp"
#include "spinchain/mpo.hpp"
#include "spinchain/numerics.hpp"
#include "spinchain/oracle.hpp"

namespace spinchain {

enum class Engine { FreeFermion, Mpo, Oracle };

inline std::string engine_name(Engine e) {
  switch (e) {
    case Engine::FreeFermion: return "freefermion";
    case Engine::Mpo: return "mpo";
    case Engine::Oracle: return "oracle";
  }
  throw std::logic_error("engine_name: bad enum");
}

inline Engine parse_engine(const std::string& s) {
  if (s == "freefermion") return Engine::FreeFermion;
  if (s == "mpo") return Engine::Mpo;
  if (s == "oracle") return Engine::Oracle;
  throw std::invalid_argument("unknown engine '" + s + "'");
}

inline Family parse_family(const std::string& s) {
  if (s == "xy") return Family::XY;
  if (s == "tilted_ising") return Family::TiltedIsing;
  if (s == "xxz") return Family::XXZField;
  throw std::invalid_argument("unknown family '" + s + "'");
}

enum class FieldPattern { Zero, Staggered, Explicit };

inline FieldPattern parse_field_pattern(const std::string& s) {
  if (s == "zero") return FieldPattern::Zero;
  if (s == "staggered") return FieldPattern::Staggered;
  if (s == "list") return FieldPattern::Explicit;
  throw std::invalid_argument("unknown field_pattern '" + s + "'");
}

// Inverse-temperature grid: an explicit list, or a geometric (default) /
// linear progression between beta_min and beta_max.
struct BetaGrid {
  std::vector<double> explicit_list;
  double lo = 0.5;
  double hi = 128.0;
  int points = 9;
  bool geometric = true;

  std::vector<double> values() const {
    if (!explicit_list.empty()) {
      auto v = explicit_list;
      std::sort(v.begin(), v.end());
      return v;
    }
    if (points < 1 || lo <= 0.0 || hi < lo)
      throw std::invalid_argument("beta grid: need 0 < beta_min <= beta_max, points >= 1");
    std::vector<double> v(points);
    if (points == 1) {
      v[0] = lo;
    } else if (geometric) {
      const double r = std::pow(hi / lo, 1.0 / (points - 1));
      for (int i = 0; i < points; ++i) v[i] = lo * std::pow(r, i);
    } else {
      for (int i = 0; i < points; ++i) v[i] = lo + (hi - lo) * i / (points - 1);
    }
    return v;
  }
};

struct MpoParams {
  double epsilon = 0.05;
  int d_max = 128;
  double svd_cut = 1e-10;
  int reorth_every = 1;
  std::string checkpoint;  // optional path for resumable sweeps
};

struct FitParams {
  bool enabled = false;
  double window_lo = 4.0;
  double window_hi = 64.0;
};

struct RunConfig {
  Engine engine = Engine::FreeFermion;
  Family family = Family::XY;
  int n = 8;
  std::vector<int> n_list;  // optional size sweep; overrides n
  double gamma = 0.0, h = 0.0;
  double hx = 0.0, hz = 0.0;
  double delta = 0.0;
  FieldPattern field_pattern = FieldPattern::Zero;
  std::vector<double> field_values;
  BetaGrid beta_grid;
  int cut = 0;  // 0 means n/2
  MpoParams mpo;
  FitParams fit;
  std::string output = "sweep.csv";
  std::string gap_csv;  // optional sidecar with n,gap rows (freefermion only)

  std::vector<int> sizes() const {
    auto v = n_list.empty() ? std::vector<int>{n} : n_list;
    std::sort(v.begin(), v.end());
    return v;
  }

  int cut_for(int sites) const { return cut > 0 ? cut : sites / 2; }

  ChainSpec chain_spec(int sites) const {
    switch (family) {
      case Family::XY: return ChainSpec::xy(sites, gamma, h);
      case Family::TiltedIsing: return ChainSpec::tilted_ising(sites, hx, hz);
      case Family::XXZField: {
        std::vector<double> f;
        switch (field_pattern) {
          case FieldPattern::Zero: break;
          case FieldPattern::Staggered: f = staggered_field(sites); break;
          case FieldPattern::Explicit:
            if (static_cast<int>(field_values.size()) != sites)
              throw std::invalid_argument("field_values length must equal n");
            f = field_values;
            break;
        }
        return ChainSpec::xxz(sites, delta, std::move(f));
      }
    }
    throw std::logic_error("chain_spec: bad family");
  }

  void validate() const {
    if (engine == Engine::FreeFermion && family != Family::XY)
      throw std::invalid_argument("engine 'freefermion' requires the xy family");
    for (const int sites : sizes()) {
      if (sites < 2) throw std::invalid_argument("sweep needs n >= 2");
      if (engine == Engine::Oracle && sites > kDenseMaxSites)
        throw std::invalid_argument("engine 'oracle' is capped at n <= " +
                                    std::to_string(kDenseMaxSites));
      const int c = cut_for(sites);
      if (c < 1 || c >= sites) throw std::invalid_argument("cut must satisfy 1 <= n_A < n");
      chain_spec(sites);  // validates family fields
    }
    if (engine == Engine::Mpo) {
      if (mpo.epsilon <= 0.0) throw std::invalid_argument("mpo.epsilon must be positive");
      if (mpo.d_max < 1) throw std::invalid_argument("mpo.d_max must be >= 1");
      if (mpo.reorth_every < 1) throw std::invalid_argument("mpo.reorth_every must be >= 1");
    }
  }
};

// One CSV row. Measures an engine does not produce stay empty.
struct ResultRow {
  std::string engine;
  std::string family;
  int n = 0;
  int n_a = 0;
  double beta = 0.0;
  std::optional<double> s_sharp, s_a, s_b, s_total, qmi;
  std::optional<double> purity_log2, mutual_purity;
  std::optional<int> d_used;
  std::optional<double> discarded_weight;
  std::optional<double> epsilon;
  double wall_time = 0.0;
};

inline constexpr const char* kCsvHeader =
    "engine,family,n,n_A,beta,s_sharp,s_A,s_B,s_total,qmi,purity_log2,"
    "mutual_purity,D_used,discarded_weight,epsilon,wall_time";

namespace detail {

// Locale-independent shortest round-trip formatting.
inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

inline std::string format_opt(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("malformed CSV number '" + s + "'");
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string csv_line(const ResultRow& r) {
  std::ostringstream os;
  os << r.engine << ',' << r.family << ',' << r.n << ',' << r.n_a << ','
     << format_double(r.beta) << ',' << format_opt(r.s_sharp) << ',' << format_opt(r.s_a) << ','
     << format_opt(r.s_b) << ',' << format_opt(r.s_total) << ',' << format_opt(r.qmi) << ','
     << format_opt(r.purity_log2) << ',' << format_opt(r.mutual_purity) << ','
     << (r.d_used ? std::to_string(*r.d_used) : std::string{}) << ','
     << format_opt(r.discarded_weight) << ',' << format_opt(r.epsilon) << ','
     << format_double(r.wall_time);
  return os.str();
}

// Resolves a path against the SPINCHAIN_OUTPUT_DIR override, if set.
inline std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (const char* dir = std::getenv("SPINCHAIN_OUTPUT_DIR"); dir && *dir && p.is_relative())
    return std::filesystem::path(dir) / p;
  return p;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
    if (!os.good()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

class WallClock {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double dt = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return dt;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace detail

struct SweepOutcome {
  std::string csv_path;
  int rows = 0;
  std::optional<LogLawFit> fit;
};

inline SweepOutcome run_sweep(const RunConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  std::vector<std::pair<double, double>> gap_rows;  // (n, gap)
  const std::vector<double> betas = cfg.beta_grid.values();

  for (const int sites : cfg.sizes()) {
    const int n_a = cfg.cut_for(sites);
    const ChainSpec spec = cfg.chain_spec(sites);
    detail::WallClock clock;

    auto base_row = [&](double beta) {
      ResultRow r;
      r.engine = engine_name(cfg.engine);
      r.family = family_name(cfg.family);
      r.n = sites;
      r.n_a = n_a;
      r.beta = beta;
      return r;
    };

    switch (cfg.engine) {
      case Engine::FreeFermion: {
        const MajoranaForm form = build_majorana_form(spec);
        const FermionSpectrum fs = fermion_spectrum(form);
        if (!cfg.gap_csv.empty()) gap_rows.emplace_back(sites, 4.0 * fs.lambdas(0));
        clock.lap();
        for (const double beta : betas) {
          const EntropyReport rep = qmi(fs, beta, n_a);
          ResultRow r = base_row(beta);
          r.s_sharp = rep.s_sharp;
          r.s_a = rep.s_a;
          r.s_b = rep.s_b;
          r.s_total = rep.s_total;
          r.qmi = rep.qmi;
          r.wall_time = clock.lap();
          rows.push_back(std::move(r));
        }
        break;
      }
      case Engine::Oracle: {
        const TermList terms = build_term_list(spec);
        for (const double beta : betas) {
          const DenseOperator rho = dense_thermal(terms, beta);
          const DenseEntropies ent = dense_entropies(rho, n_a);
          ResultRow r = base_row(beta);
          r.s_sharp = dense_osee(rho, n_a);
          r.s_a = ent.s_a;
          r.s_b = ent.s_b;
          r.s_total = ent.s_total;
          r.qmi = ent.qmi;
          r.purity_log2 = std::log2(purity(rho.matrix));
          r.mutual_purity = dense_mutual_purity(rho, n_a);
          r.wall_time = clock.lap();
          rows.push_back(std::move(r));
        }
        break;
      }
      case Engine::Mpo: {
        const TermList terms = build_term_list(spec);
        const GateSet gates = build_gates(terms, cfg.mpo.epsilon);
        const TruncationPolicy policy{cfg.mpo.d_max, cfg.mpo.svd_cut};
        OperatorMPS state = OperatorMPS::infinite_temperature(sites);
        long steps_done = 0;
        if (!cfg.mpo.checkpoint.empty()) {
          const auto ckpt = detail::resolve_output(cfg.mpo.checkpoint);
          if (std::filesystem::exists(ckpt)) {
            auto [loaded, beta_reached] = load_checkpoint(ckpt.string());
            if (loaded.n() != sites)
              throw std::runtime_error("checkpoint size mismatch for " + ckpt.string());
            const double k = beta_reached / cfg.mpo.epsilon;
            if (std::abs(k - std::llround(k)) > 1e-9)
              throw std::runtime_error("checkpoint beta is not a step multiple");
            state = std::move(loaded);
            steps_done = std::llround(k);
          }
        }
        double discarded_acc = 0.0;
        clock.lap();
        for (const double beta : betas) {
          // Each grid point continues the same trajectory; targets snap to
          // whole steps of epsilon and the snapped beta is what gets emitted.
          const long target = std::max<long>(steps_done, std::llround(beta / cfg.mpo.epsilon));
          int d_used = state.max_bond_dim();
          for (; steps_done < target; ++steps_done) {
            const StepReport sr = state.evolve_step(gates, policy);
            discarded_acc += sr.discarded_weight;
            d_used = std::max(d_used, sr.max_bond);
            if (cfg.mpo.reorth_every > 0 && (steps_done + 1) % cfg.mpo.reorth_every == 0)
              state.reorthogonalize();
          }
          ResultRow r = base_row(steps_done * cfg.mpo.epsilon);
          r.s_sharp = state.osee(n_a);
          r.purity_log2 = state.purity_log2();
          r.mutual_purity = state.mutual_purity(n_a);
          r.d_used = d_used;
          r.discarded_weight = discarded_acc;
          r.epsilon = cfg.mpo.epsilon;
          r.wall_time = clock.lap();
          rows.push_back(std::move(r));
          if (!cfg.mpo.checkpoint.empty())
            save_checkpoint(state, steps_done * cfg.mpo.epsilon,
                            detail::resolve_output(cfg.mpo.checkpoint).string());
        }
        break;
      }
    }
  }

  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const ResultRow& r : rows) os << detail::csv_line(r) << '\n';
  const auto out_path = detail::resolve_output(cfg.output);
  detail::atomic_write(out_path, os.str());

  if (!cfg.gap_csv.empty()) {
    std::ostringstream gs;
    gs << "n,gap\n";
    for (const auto& [sites, gap] : gap_rows)
      gs << static_cast<int>(sites) << ',' << detail::format_double(gap) << '\n';
    detail::atomic_write(detail::resolve_output(cfg.gap_csv), gs.str());
  }

  SweepOutcome outcome;
  outcome.csv_path = out_path.string();
  outcome.rows = static_cast<int>(rows.size());
  if (cfg.fit.enabled) {
    std::vector<std::pair<double, double>> pts;
    for (const ResultRow& r : rows)
      if (r.s_sharp) pts.emplace_back(r.beta, *r.s_sharp);
    outcome.fit = fit_log_law(pts, cfg.fit.window_lo, cfg.fit.window_hi);
  }
  return outcome;
}

// ---- fit subcommand ----------------------------------------------------

enum class FitLaw { LogBeta, GapExp };

inline FitLaw parse_fit_law(const std::string& s) {
  if (s == "log_beta") return FitLaw::LogBeta;
  if (s == "gap_exp") return FitLaw::GapExp;
  throw std::invalid_argument("unknown fit law '" + s + "'");
}

struct FitCommandResult {
  FitLaw law = FitLaw::LogBeta;
  double c = 0.0, c_prime = 0.0;  // log_beta law
  double xi = 0.0;                // gap_exp law
  double residual = 0.0;
  int points = 0;
};

// Reads (x_column, y_column) pairs from a CSV produced by run_sweep (or the
// gap sidecar). Rows with an empty y field are skipped.
inline std::vector<std::pair<double, double>> read_csv_pairs(const std::string& path,
                                                             const std::string& x_col,
                                                             const std::string& y_col) {
  std::ifstream is(detail::resolve_output(path));
  if (!is) throw std::runtime_error("cannot open CSV " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("malformed CSV: empty file");
  const auto header = detail::split_csv_line(line);
  std::ptrdiff_t xi = -1, yi = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == x_col) xi = static_cast<std::ptrdiff_t>(i);
    if (header[i] == y_col) yi = static_cast<std::ptrdiff_t>(i);
  }
  if (xi < 0 || yi < 0)
    throw std::runtime_error("malformed CSV: missing column " + (xi < 0 ? x_col : y_col));
  std::vector<std::pair<double, double>> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) throw std::runtime_error("malformed CSV row");
    if (cells[yi].empty()) continue;
    out.emplace_back(detail::parse_double(cells[xi]), detail::parse_double(cells[yi]));
  }
  return out;
}

// law log_beta: fits s_sharp = (c/3) log2(beta) + c' over the beta window.
// law gap_exp: fits gap ~ exp(-n/xi) over the n window (columns n, gap).
inline FitCommandResult fit_command(const std::string& csv_path, FitLaw law, double window_lo,
                                    double window_hi) {
  if (window_hi < window_lo) throw std::invalid_argument("empty fit window");
  FitCommandResult res;
  res.law = law;
  if (law == FitLaw::LogBeta) {
    const auto pts = read_csv_pairs(csv_path, "beta", "s_sharp");
    const LogLawFit fit = fit_log_law(pts, window_lo, window_hi);
    res.c = fit.c;
    res.c_prime = fit.c_prime;
    res.residual = fit.rms_residual;
    int k = 0;
    for (const auto& p : pts)
      if (p.first >= window_lo && p.first <= window_hi) ++k;
    res.points = k;
  } else {
    auto pts = read_csv_pairs(csv_path, "n", "gap");
    std::erase_if(pts, [&](const auto& p) { return p.first < window_lo || p.first > window_hi; });
    const GapFit fit = fit_gap_points(pts);
    res.xi = fit.xi;
    res.residual = fit.rms_residual;
    res.points = fit.points_used;
  }
  return res;
}

// ---- cross-engine equivalence suite (the `check` subcommand) ------------

struct CheckResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double bound = 0.0;
};

inline ChainSpec random_xy_spec(std::mt19937& rng, int n_min = 2, int n_max = 6) {
  std::uniform_int_distribution<int> nd(n_min, n_max);
  std::uniform_real_distribution<double> gd(0.0, 1.0), hd(0.0, 1.2);
  return ChainSpec::xy(nd(rng), gd(rng), hd(rng));
}

inline std::vector<CheckResult> run_equivalence_checks(unsigned seed = 12345) {
  std::vector<CheckResult> out;
  std::mt19937 rng(seed);

  {  // free-fermion OSEE/QMI vs dense oracle on random XY specs
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
      const ChainSpec spec = random_xy_spec(rng);
      const FermionSpectrum fs = fermion_spectrum(build_majorana_form(spec));
      const TermList terms = build_term_list(spec);
      for (const double beta : {0.3, 1.0, 3.0}) {
        const EntropyReport rep = qmi(fs, beta, spec.n / 2 > 0 ? spec.n / 2 : 1);
        const DenseOperator rho = dense_thermal(terms, beta);
        const int cut = spec.n / 2 > 0 ? spec.n / 2 : 1;
        worst = std::max(worst, std::abs(rep.s_sharp - dense_osee(rho, cut)));
        worst = std::max(worst, std::abs(rep.qmi - dense_qmi(rho, cut)));
      }
    }
    out.push_back({"freefermion_vs_oracle", worst < 1e-8, worst, 1e-8});
  }

  {  // MPO thermal state vs dense Pauli coefficients
    const ChainSpec spec = ChainSpec::xy(6, 0.0, 0.0);
    const TermList terms = build_term_list(spec);
    const double eps = 0.02;
    const GateSet gates = build_gates(terms, eps);
    OperatorMPS state = OperatorMPS::infinite_temperature(spec.n);
    for (int k = 0; k < 50; ++k) state.evolve_step(gates, {256, 1e-14});
    const Vector diff =
        state.coefficients() - pauli_coefficients(dense_thermal(terms, 1.0));
    const double worst = diff.cwiseAbs().maxCoeff();
    out.push_back({"mpo_vs_oracle", worst < 1e-6, worst, 1e-6});
  }

  {  // MPO OSEE vs free-fermion OSEE
    const ChainSpec spec = ChainSpec::xy(10, 0.0, 0.0);
    const GateSet gates = build_gates(build_term_list(spec), 0.05);
    OperatorMPS state = OperatorMPS::infinite_temperature(spec.n);
    for (int k = 0; k < 40; ++k) state.evolve_step(gates, {128, 1e-10});
    const FermionSpectrum fs = fermion_spectrum(build_majorana_form(spec));
    const double exact = osee(gamma_operator_space(fs, 2.0), spec.n / 2);
    const double worst = std::abs(state.osee(spec.n / 2) - exact);
    out.push_back({"mpo_vs_freefermion_osee", worst < 1e-3, worst, 1e-3});
  }

  return out;
}

}  // namespace spinchain
