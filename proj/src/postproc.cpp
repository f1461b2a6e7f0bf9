#include "qew/postproc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "qew/bounds.hpp"
#include "qew/error.hpp"
#include "qew/parallel.hpp"
#include "qew/rng.hpp"

namespace qew {

// ---------------------------------------------------------------------------
// CorrelationTable

CorrelationTable::CorrelationTable(int d) : d_(d) {
  if (d < 2) {
    throw Error(ErrorKind::InvalidDimension,
                "correlation table: invalid dimension d=" + std::to_string(d));
  }
}

void CorrelationTable::set(const LocalObservable& obs, double value) {
  if (obs.j() >= d_) {
    throw Error(ErrorKind::OutOfRange, obs.label() + " is out of range for d=" + std::to_string(d_));
  }
  values_[obs] = value;
}

std::optional<double> CorrelationTable::get(const LocalObservable& obs) const {
  auto it = values_.find(obs);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double CorrelationTable::at(const LocalObservable& obs) const {
  auto it = values_.find(obs);
  if (it == values_.end()) {
    throw Error(ErrorKind::MissingEntry, "correlation table has no entry for " + obs.label());
  }
  return it->second;
}

void CorrelationTable::merge(const CorrelationTable& other) {
  if (other.d_ != d_) {
    throw Error(ErrorKind::DimensionMismatch, "cannot merge tables of dimension " +
                                                  std::to_string(d_) + " and " +
                                                  std::to_string(other.d_));
  }
  for (const auto& [obs, v] : other.values_) values_[obs] = v;
}

std::vector<std::string> CorrelationTable::missing() const {
  std::vector<std::string> out;
  for (const auto& term : decomposition_terms(WitnessKind::Werner, d_)) {
    if (!values_.contains(term.obs)) out.push_back(term.obs.label());
  }
  return out;
}

void CorrelationTable::require_complete() const {
  const auto absent = missing();
  if (absent.empty()) return;
  std::string list;
  for (const auto& label : absent) list += (list.empty() ? "" : ", ") + label;
  throw Error(ErrorKind::MissingEntry, "incomplete correlation table, missing: " + list);
}

CorrelationTable exact_table(const DensityMatrix& rho) {
  const int d = rho.dim();
  CorrelationTable t(d);
  for (const auto& term : decomposition_terms(WitnessKind::Werner, d)) {
    const ComplexMatrix o = observable_matrix(term.obs, d);
    t.set(term.obs, expectation(kron(o, o), rho));
  }
  return t;
}

// ---------------------------------------------------------------------------
// M matrices and quadratic forms

MMatrix assemble_m(const CorrelationTable& t, MSign sign) {
  t.require_complete();
  const int d = t.dim();
  MMatrix m{d, sign, RealMatrix::Zero(d, d)};
  const double s = sign == MSign::Plus ? 1.0 : -1.0;
  for (int a = 0; a < d; ++a) {
    m.entries(a, a) = t.at(LocalObservable::projector(a));
    for (int b = a + 1; b < d; ++b) {
      const double v =
          0.25 * (t.at(LocalObservable::x(a, b)) + s * t.at(LocalObservable::y(a, b)));
      m.entries(a, b) = v;
      m.entries(b, a) = v;
    }
  }
  return m;
}

SignVector::SignVector(int d) : entries_(static_cast<std::size_t>(d), 1) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "sign vector needs d >= 1");
}

SignVector::SignVector(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorKind::InvalidDimension, "sign vector needs d >= 1");
  for (int e : entries_) {
    if (e != 1 && e != -1) {
      throw Error(ErrorKind::OutOfRange, "sign vector entries must be +1 or -1");
    }
  }
  if (entries_.front() == -1) {
    for (int& e : entries_) e = -e;
  }
}

std::strong_ordering SignVector::operator<=>(const SignVector& other) const {
  const std::size_t n = std::min(entries_.size(), other.entries_.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (entries_[k] != other.entries_[k]) {
      return entries_[k] == 1 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
  }
  return entries_.size() <=> other.entries_.size();
}

SignVector SignVector::from_flip_mask(int d, std::uint64_t mask) {
  std::vector<int> e(static_cast<std::size_t>(d), 1);
  for (int k = 1; k < d; ++k) {
    if ((mask >> (k - 1)) & 1U) e[static_cast<std::size_t>(k)] = -1;
  }
  return SignVector(std::move(e));
}

double quad_form(const RealMatrix& m, const std::vector<int>& xi) {
  if (m.rows() != static_cast<Eigen::Index>(xi.size()) || m.cols() != m.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "quad_form: matrix is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", sign vector has " +
                    std::to_string(xi.size()) + " entries");
  }
  double acc = 0.0;
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    double row = 0.0;
    for (Eigen::Index b = 0; b < m.cols(); ++b) row += m(a, b) * xi[static_cast<std::size_t>(b)];
    acc += xi[static_cast<std::size_t>(a)] * row;
  }
  return acc;
}

double quad_form(const MMatrix& m, const SignVector& xi) {
  return quad_form(m.entries, xi.entries());
}

// ---------------------------------------------------------------------------
// Exact search

namespace {

struct Candidate {
  double value;
  std::uint64_t mask;
};

// True if `a` is a strictly better objective value than `b` under `sense`,
// ignoring differences below `tol`.
bool strictly_better(double a, double b, Sense sense, double tol) {
  return sense == Sense::Min ? a < b - tol : a > b + tol;
}

// Same order as SignVector::operator<=> on flip masks: the first differing
// entry is the lowest differing bit, and a clear bit (+1) sorts first.
bool mask_less(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t diff = a ^ b;
  return diff != 0 && (a & diff & (~diff + 1)) == 0;
}

// Scans Gray-code indices [begin, end) of the (d-1)-bit flip masks.
Candidate scan_range(const RealMatrix& m, Sense sense, std::uint64_t begin, std::uint64_t end,
                     double tol, int d) {
  std::vector<int> xi(static_cast<std::size_t>(d), 1);
  std::uint64_t mask = begin ^ (begin >> 1);
  for (int k = 1; k < d; ++k) {
    if ((mask >> (k - 1)) & 1U) xi[static_cast<std::size_t>(k)] = -1;
  }
  // field[a] = sum_{b != a} M_ab xi_b
  std::vector<double> field(static_cast<std::size_t>(d), 0.0);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (b != a) field[static_cast<std::size_t>(a)] += m(a, b) * xi[static_cast<std::size_t>(b)];
    }
  }
  double value = quad_form(m, xi);

  Candidate best{value, mask};
  for (std::uint64_t i = begin + 1; i < end; ++i) {
    const int bit = std::countr_zero(i);
    const int k = bit + 1;
    const auto ks = static_cast<std::size_t>(k);
    value -= 4.0 * xi[ks] * field[ks];
    xi[ks] = -xi[ks];
    mask ^= (std::uint64_t{1} << bit);
    const double twice = 2.0 * xi[ks];
    for (int a = 0; a < d; ++a) {
      if (a != k) field[static_cast<std::size_t>(a)] += twice * m(a, k);
    }
    if (strictly_better(value, best.value, sense, tol) ||
        (!strictly_better(best.value, value, sense, tol) && mask_less(mask, best.mask))) {
      best = {value, mask};
    }
  }
  return best;
}

}  // namespace

StarResult star_exact(const MMatrix& m, Sense sense) {
  const int d = m.d;
  if (d > kExactBudget) {
    throw Error(ErrorKind::OverBudget,
                "exact sign optimization is limited to d <= " + std::to_string(kExactBudget) +
                    " (got d=" + std::to_string(d) + "); use the heuristic optimizer");
  }
  if (d < 1 || m.entries.rows() != d || m.entries.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "star_exact: malformed M matrix");
  }
  const std::uint64_t total = std::uint64_t{1} << (d - 1);
  const double tol = 1e-12 * (1.0 + m.entries.cwiseAbs().sum());

  // Fixed chunking, independent of the worker count.
  const std::uint64_t chunk = std::max<std::uint64_t>(total / 64, 1 << 12);
  const std::size_t chunks = static_cast<std::size_t>((total + chunk - 1) / chunk);
  std::vector<Candidate> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t begin = c * chunk;
    const std::uint64_t end = std::min(total, begin + chunk);
    partial[c] = scan_range(m.entries, sense, begin, end, tol, d);
  });

  // Re-evaluate chunk winners from scratch so the reduction does not depend on
  // accumulated rounding along each chunk's Gray path.
  std::optional<StarResult> best;
  for (const auto& cand : partial) {
    SignVector xi = SignVector::from_flip_mask(d, cand.mask);
    const double v = quad_form(m, xi);
    if (!best || strictly_better(v, best->value, sense, tol) ||
        (!strictly_better(best->value, v, sense, tol) && xi < best->xi)) {
      best = StarResult{v, std::move(xi)};
    }
  }
  return *best;
}

StarResult f_star_exact(const MMatrix& mplus) { return star_exact(mplus, Sense::Min); }
StarResult g_star_exact(const MMatrix& mminus) { return star_exact(mminus, Sense::Max); }

// ---------------------------------------------------------------------------
// Simulated annealing

namespace {

struct AnnealRun {
  double value;  // in minimization convention
  std::vector<int> xi;
};

AnnealRun anneal_once(const RealMatrix& j, int d, double scale, int sweeps, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  std::vector<int> xi(static_cast<std::size_t>(d));
  for (auto& s : xi) s = coin(rng) ? 1 : -1;
  std::vector<double> field(static_cast<std::size_t>(d), 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      if (a != b) field[static_cast<std::size_t>(a)] += j(a, b) * xi[static_cast<std::size_t>(b)];
  double value = quad_form(j, xi);
  AnnealRun best{value, xi};

  auto flip = [&](int k) {
    const auto ks = static_cast<std::size_t>(k);
    value -= 4.0 * xi[ks] * field[ks];
    xi[ks] = -xi[ks];
    const double twice = 2.0 * xi[ks];
    for (int a = 0; a < d; ++a)
      if (a != k) field[static_cast<std::size_t>(a)] += twice * j(a, k);
  };

  const double t_hot = 2.0 * scale;
  const double t_cold = 1e-3 * scale;
  const double ratio = sweeps > 1 ? std::pow(t_cold / t_hot, 1.0 / (sweeps - 1)) : 1.0;
  double temp = t_hot;
  for (int sweep = 0; sweep < sweeps; ++sweep, temp *= ratio) {
    for (int k = 0; k < d; ++k) {
      const double delta = -4.0 * xi[static_cast<std::size_t>(k)] * field[static_cast<std::size_t>(k)];
      if (delta <= 0.0 || unit(rng) < std::exp(-delta / temp)) {
        flip(k);
        if (value < best.value) best = {value, xi};
      }
    }
  }
  // Zero-temperature descent from the best configuration seen.
  xi = best.xi;
  std::fill(field.begin(), field.end(), 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      if (a != b) field[static_cast<std::size_t>(a)] += j(a, b) * xi[static_cast<std::size_t>(b)];
  value = quad_form(j, xi);
  for (bool improved = true; improved;) {
    improved = false;
    for (int k = 0; k < d; ++k) {
      if (-4.0 * xi[static_cast<std::size_t>(k)] * field[static_cast<std::size_t>(k)] < -1e-15 * scale) {
        flip(k);
        improved = true;
      }
    }
  }
  return {quad_form(j, xi), xi};
}

}  // namespace

StarResult star_heuristic(const MMatrix& m, Sense sense, std::uint64_t seed,
                          AnnealingOptions options) {
  const int d = m.d;
  if (d < 1 || m.entries.rows() != d || m.entries.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "star_heuristic: malformed M matrix");
  }
  if (options.sweeps < 1 || options.restarts < 1) {
    throw Error(ErrorKind::OutOfRange, "star_heuristic: sweeps and restarts must be >= 1");
  }
  const RealMatrix j = sense == Sense::Min ? m.entries : RealMatrix(-m.entries);

  double scale = 0.0;
  for (int a = 0; a < d; ++a) {
    double row = 0.0;
    for (int b = 0; b < d; ++b)
      if (a != b) row += std::abs(j(a, b));
    scale = std::max(scale, row);
  }
  if (scale == 0.0) {
    SignVector ones(d);
    return {quad_form(m, ones), ones};
  }

  std::vector<AnnealRun> runs(static_cast<std::size_t>(options.restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    runs[r] = anneal_once(j, d, scale, options.sweeps, derive_seed(seed, r));
  });

  std::optional<StarResult> best;
  for (const auto& run : runs) {
    SignVector xi(run.xi);
    const double v = quad_form(m, xi);
    if (!best || strictly_better(v, best->value, sense, 0.0) ||
        (v == best->value && xi < best->xi)) {
      best = StarResult{v, std::move(xi)};
    }
  }
  return *best;
}

double diagnostic_bounds(const MMatrix& m, Sense sense) {
  double off = 0.0;
  for (int a = 0; a < m.d; ++a)
    for (int b = 0; b < m.d; ++b)
      if (a != b) off += std::abs(m.entries(a, b));
  const double tr = m.entries.trace();
  return sense == Sense::Min ? tr - off : tr + off;
}

ComplexMatrix phase_flipped_witness(WitnessKind kind, const SignVector& xi) {
  const int d = xi.dim();
  ComplexMatrix w = ComplexMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a) w(a, a) = xi[a];
  const ComplexMatrix u = kron(ComplexMatrix::Identity(d, d), w);
  return u * witness_operator(kind, d) * u.adjoint();
}

// ---------------------------------------------------------------------------
// Report

const char* to_string(OptimizerMode mode) noexcept {
  switch (mode) {
    case OptimizerMode::Exact: return "exact";
    case OptimizerMode::Heuristic: return "heuristic";
    case OptimizerMode::Auto: return "auto";
  }
  return "?";
}

OptimizerMode parse_optimizer_mode(const std::string& text) {
  if (text == "exact") return OptimizerMode::Exact;
  if (text == "heuristic") return OptimizerMode::Heuristic;
  if (text == "auto") return OptimizerMode::Auto;
  throw Error(ErrorKind::Parse, "unknown optimizer mode '" + text + "' (exact|heuristic|auto)");
}

namespace {

double clamp_with_warning(double v, double lo, double hi, const char* name,
                          std::vector<std::string>& warnings) {
  if (v >= lo && v <= hi) return v;
  const double c = std::clamp(v, lo, hi);
  warnings.push_back(std::string(name) + "=" + std::to_string(v) + " outside [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "], clamped to " +
                     std::to_string(c));
  return c;
}

}  // namespace

BoundReport entanglement_report(const CorrelationTable& t, OptimizerMode mode,
                                std::uint64_t seed) {
  t.require_complete();
  const int d = t.dim();
  const MMatrix mplus = assemble_m(t, MSign::Plus);
  const MMatrix mminus = assemble_m(t, MSign::Minus);

  BoundReport r;
  r.d = d;
  r.f = quad_form(mplus, SignVector(d));
  r.g = quad_form(mminus, SignVector(d));

  const OptimizerMode used =
      mode == OptimizerMode::Auto
          ? (d <= kExactBudget ? OptimizerMode::Exact : OptimizerMode::Heuristic)
          : mode;
  r.optimizer = used;
  StarResult fs = used == OptimizerMode::Exact
                      ? f_star_exact(mplus)
                      : star_heuristic(mplus, Sense::Min, derive_seed(seed, 0));
  StarResult gs = used == OptimizerMode::Exact
                      ? g_star_exact(mminus)
                      : star_heuristic(mminus, Sense::Max, derive_seed(seed, 1));
  r.f_star = fs.value;
  r.xi_f = std::move(fs.xi);
  r.g_star = gs.value;
  r.xi_g = std::move(gs.xi);
  if (used == OptimizerMode::Heuristic) {
    r.warnings.push_back("heuristic (lower bound may be loose)");
  }

  r.diag_f_lower = diagnostic_bounds(mplus, Sense::Min);
  r.diag_f_upper = diagnostic_bounds(mplus, Sense::Max);
  r.diag_g_lower = diagnostic_bounds(mminus, Sense::Min);
  r.diag_g_upper = diagnostic_bounds(mminus, Sense::Max);

  const IsotropicBound iso(d);
  r.bound_wer_plain = b_werner(std::clamp(r.f, -1.0, 1.0));
  r.bound_iso_plain = iso(std::clamp(r.g, 0.0, static_cast<double>(d)));
  r.bound_wer = b_werner(clamp_with_warning(r.f_star, -1.0, 1.0, "f_star", r.warnings));
  r.bound_iso =
      iso(clamp_with_warning(r.g_star, 0.0, static_cast<double>(d), "g_star", r.warnings));
  r.bound_final = std::max(r.bound_wer, r.bound_iso);
  return r;
}

}  // namespace qew
