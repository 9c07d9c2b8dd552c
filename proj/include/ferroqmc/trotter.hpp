#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ferroqmc/error.hpp"
#include "ferroqmc/hamiltonian.hpp"
#include "ferroqmc/linalg.hpp"

namespace ferroqmc {

/// F is the one-qubit gate diag(t, 1); G and H are the two-qubit gates
///
///   g(t) = [1+t^2 0 0 t; 0 1 0 0; 0 0 1 0; t 0 0 1]
///   h(t) = [1 0 0 0; 0 1+t^2 t 0; 0 t 1 0; 0 0 0 1]
///
/// written in the local basis |a b> (index 2a + b) where a is the bit of the
/// first qubit and b the bit of the second.
enum class GateKind { F, G, H };

inline std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::F: return "f";
    case GateKind::G: return "g";
    case GateKind::H: return "h";
  }
  return "?";
}

struct Gate {
  GateKind kind = GateKind::F;
  int first = 1;   // qubit (1-based)
  int second = 0;  // second qubit for G/H, 0 for F
  double t = 0.0;  // f argument lies in (0, 2); g/h parameter in (0, 1)

  int arity() const noexcept { return kind == GateKind::F ? 1 : 2; }
  bool acts_on(int q) const noexcept { return first == q || (arity() == 2 && second == q); }

  friend bool operator==(const Gate&, const Gate&) = default;
};

inline bool gate_in_range(const Gate& g) {
  if (g.kind == GateKind::F) return g.t > 0.0 && g.t < 2.0 && g.second == 0;
  return g.t > 0.0 && g.t < 1.0 && g.first < g.second;
}

/// gates[0] is applied first; the circuit product is gates[J-1] ... gates[0].
struct GateSequence {
  int n = 0;
  std::vector<Gate> gates;
  int period_len = 0;  // stored gates in one half-period C
  int r = 0;           // number of periods C C^T
  int skipped = 0;     // identity gates elided over the whole sequence

  std::size_t size() const noexcept { return gates.size(); }
  bool empty() const noexcept { return gates.empty(); }
  /// Gate count the construction would have without elision, 2 n^2 r.
  long long unelided_length() const noexcept { return 2LL * n * n * r; }
};

// ---------------------------------------------------------------------------
// Dense gate action

namespace detail {

inline void check_gate_qubits(const Gate& g, int n) {
  if (g.first < 1 || g.first > n || (g.arity() == 2 && (g.second < 1 || g.second > n || g.second == g.first)))
    throw Error(ErrorCode::InvalidInput, "gate acts outside the register", g.first, g.second);
}

}  // namespace detail

/// Replaces m by G m without forming G.
inline void apply_gate_left(const Gate& g, DenseMatrix& m) {
  const std::size_t dim = m.dim();
  const double t = g.t;
  if (g.kind == GateKind::F) {
    const std::size_t bit = std::size_t{1} << (g.first - 1);
    for (std::size_t x = 0; x < dim; ++x)
      if (!(x & bit))
        for (double& v : m.row(x)) v *= t;
    return;
  }
  const std::size_t ba = std::size_t{1} << (g.first - 1);
  const std::size_t bb = std::size_t{1} << (g.second - 1);
  const double diag = 1.0 + t * t;
  for (std::size_t x = 0; x < dim; ++x) {
    if (x & (ba | bb)) continue;
    // g mixes |00> with |11>; h mixes |01> with |10>. The heavier diagonal
    // entry 1+t^2 sits on |00> for g and on |01> (b set) for h.
    const std::size_t heavy = g.kind == GateKind::G ? x : (x | bb);
    const std::size_t light = g.kind == GateKind::G ? (x | ba | bb) : (x | ba);
    auto rh = m.row(heavy);
    auto rl = m.row(light);
    for (std::size_t j = 0; j < dim; ++j) {
      const double vh = rh[j], vl = rl[j];
      rh[j] = diag * vh + t * vl;
      rl[j] = t * vh + vl;
    }
  }
}

inline DenseMatrix gate_matrix(const Gate& g, int n) {
  detail::check_gate_qubits(g, n);
  DenseMatrix m = DenseMatrix::identity(std::size_t{1} << n);
  apply_gate_left(g, m);
  return m;
}

/// Ordered product gates[end-1] ... gates[begin].
inline DenseMatrix ordered_product(const GateSequence& seq, std::size_t begin, std::size_t end) {
  DenseMatrix m = DenseMatrix::identity(std::size_t{1} << seq.n);
  for (std::size_t k = begin; k < end; ++k) apply_gate_left(seq.gates[k], m);
  return m;
}

// ---------------------------------------------------------------------------
// Sequence construction

/// Smallest r with r > 2 beta, 6 beta n^2 / r <= 1 and
///   4 n^2 beta / r + 2 n^2 beta^2 / r + 2 pi 27 beta^3 n^6 / r^2 <= eps / 4.
inline int choose_r(int n, double beta, double eps) {
  if (n < 1 || !(beta > 0.0) || !(eps > 0.0 && eps <= 1.0))
    throw Error(ErrorCode::InvalidInput, "choose_r needs n >= 1, beta > 0, 0 < eps <= 1");
  const double n2 = static_cast<double>(n) * n;
  const double n6 = n2 * n2 * n2;
  auto ok = [&](double r) {
    if (!(r > 2.0 * beta)) return false;
    if (6.0 * beta * n2 / r > 1.0) return false;
    const double w = 4.0 * n2 * beta / r + 2.0 * n2 * beta * beta / r +
                     2.0 * std::numbers::pi * 27.0 * beta * beta * beta * n6 / (r * r);
    return w <= eps / 4.0;
  };
  // Every term is decreasing in r, so double to bracket then bisect.
  long long hi = 1;
  while (!ok(static_cast<double>(hi))) {
    hi *= 2;
    if (hi > (1LL << 40)) throw Error(ErrorCode::InvalidInput, "no admissible Trotter count");
  }
  long long lo = hi / 2;  // lo fails (or is 0)
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    if (ok(static_cast<double>(mid))) hi = mid;
    else lo = mid;
  }
  return static_cast<int>(hi);
}

/// Half-period C for a given r: f_i(e^{-d'_i}) for all i, then g_ij(q'_ij),
/// then h_ij(p'_ij), with primed coefficients scaled by beta / r. Identity
/// factors are dropped; the count of dropped factors is returned in `skipped`.
inline std::vector<Gate> half_period(const FerroHamiltonian& h, double beta, int r, int& skipped) {
  const double scale = beta / r;
  const SplitCoefficients split(h);
  std::vector<Gate> c;
  skipped = 0;
  for (int i = 1; i <= h.n(); ++i) {
    const double d = scale * h.d(i);
    if (d == 0.0) { ++skipped; continue; }
    c.push_back({GateKind::F, i, 0, std::exp(-d)});
  }
  for (int i = 1; i <= h.n(); ++i)
    for (int j = i + 1; j <= h.n(); ++j) {
      const double q = scale * split.q(i, j);
      if (q == 0.0) { ++skipped; continue; }
      c.push_back({GateKind::G, i, j, q});
    }
  for (int i = 1; i <= h.n(); ++i)
    for (int j = i + 1; j <= h.n(); ++j) {
      const double p = scale * split.p(i, j);
      if (p == 0.0) { ++skipped; continue; }
      c.push_back({GateKind::H, i, j, p});
    }
  return c;
}

/// (C, C reversed) repeated r times. With every gate symmetric the second half
/// multiplies to the transpose of the first.
inline GateSequence build_sequence_with_r(const FerroHamiltonian& h, double beta, int r) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidInput, "beta must be positive");
  if (r < 1) throw Error(ErrorCode::InvalidInput, "Trotter count r must be positive");
  GateSequence seq;
  seq.n = h.n();
  seq.r = r;
  int skipped_half = 0;
  const std::vector<Gate> c = half_period(h, beta, r, skipped_half);
  for (const Gate& g : c)
    if (!gate_in_range(g))
      throw Error(ErrorCode::OutOfRange, "gate parameter outside the gate set; increase r", g.first, g.second);
  seq.period_len = static_cast<int>(c.size());
  seq.skipped = 2 * skipped_half * r;
  seq.gates.reserve(2 * c.size() * static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) {
    seq.gates.insert(seq.gates.end(), c.begin(), c.end());
    seq.gates.insert(seq.gates.end(), c.rbegin(), c.rend());
  }
  return seq;
}

inline GateSequence build_sequence(const FerroHamiltonian& h, double beta, double eps) {
  return build_sequence_with_r(h, beta, choose_r(h.n(), beta, eps));
}

/// log Tr[G_J ... G_1], renormalising the running product to stay in range.
inline double sequence_log_trace_exact(const GateSequence& seq, int cap = kDefaultDenseCap) {
  detail::check_dense_cap(seq.n, cap);
  if (seq.empty()) return seq.n * std::log(2.0);
  for (const Gate& g : seq.gates) detail::check_gate_qubits(g, seq.n);
  DenseMatrix m = DenseMatrix::identity(std::size_t{1} << seq.n);
  double log_scale = 0.0;
  for (std::size_t k = 0; k < seq.gates.size(); ++k) {
    apply_gate_left(seq.gates[k], m);
    if ((k & 63u) == 63u || k + 1 == seq.gates.size()) {
      const double s = m.max_abs();
      m *= 1.0 / s;
      log_scale += std::log(s);
    }
  }
  return log_scale + std::log(m.trace());
}

inline double sequence_trace_exact(const GateSequence& seq, int cap = kDefaultDenseCap) {
  return std::exp(sequence_log_trace_exact(seq, cap));
}

// ---------------------------------------------------------------------------
// Numeric verifiers for the gate-level error terms

namespace detail {

/// X (x) X and Y (x) Y on two qubits, local index 2a + b.
inline DenseMatrix pauli_xx() {
  DenseMatrix m(4);
  m(0, 3) = m(3, 0) = m(1, 2) = m(2, 1) = 1.0;
  return m;
}
inline DenseMatrix pauli_yy() {
  DenseMatrix m(4);
  m(0, 3) = m(3, 0) = -1.0;
  m(1, 2) = m(2, 1) = 1.0;
  return m;
}
inline DenseMatrix i_x() {
  DenseMatrix m(4);
  // X on the second qubit, which is the high bit of the two-qubit index.
  m(0, 2) = m(2, 0) = m(1, 3) = m(3, 1) = 1.0;
  return m;
}

}  // namespace detail

/// E(t) = log g(t) + (t/2)(YY - XX) and F(t) = log h(t) + (t/2)(-YY - XX).
inline DenseMatrix gate_error_g(double t) {
  return sym_log(gate_matrix({GateKind::G, 1, 2, t}, 2)) + (0.5 * t) * (detail::pauli_yy() - detail::pauli_xx());
}
inline DenseMatrix gate_error_h(double t) {
  return sym_log(gate_matrix({GateKind::H, 1, 2, t}, 2)) - (0.5 * t) * (detail::pauli_yy() + detail::pauli_xx());
}

struct Prop1Norms {
  double e_norm = 0.0;
  double f_norm = 0.0;
  double conjugation_gap = 0.0;  // || F - (I x X) E (I x X) ||_max
};

inline Prop1Norms verify_prop1(double t) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::InvalidInput, "t must lie in (0,1)");
  const DenseMatrix e = gate_error_g(t);
  const DenseMatrix f = gate_error_h(t);
  const DenseMatrix ix = detail::i_x();
  return {sym_norm(e), sym_norm(f), max_abs_diff(f, ix * e * ix)};
}

/// Closed-form exponent rate R(t) = acosh(1 + t^2/2) / sqrt(1 + t^2/4).
inline double exponent_rate(double t) {
  return std::acosh(1.0 + 0.5 * t * t) / std::sqrt(1.0 + 0.25 * t * t);
}

struct TrotterDiagnostics {
  double q_norm = 0.0;              // ||log(G_J...G_1) + beta H||
  double q_bound = 0.0;             // 2 n^2 beta^2 / r + 2 pi 27 beta^3 n^6 / r^2
  double magnus_delta_norm = 0.0;   // ||log(C C^T) - sum_k 2 log G_k||
  double magnus_bound = 0.0;        // 2 pi (delta L)^3, delta = 3 beta / r, L = n^2
  std::vector<Prop1Norms> prop1_norms;  // one per two-qubit gate of C
  double period_palindrome_gap = 0.0;   // || P_period - C C^T ||_max
};

/// Measures the error terms of one period and of the full product. The
/// per-gate logarithms of C sum to -(beta/r) H plus the 2E + 2F corrections,
/// so Delta is what remains of log(C C^T).
inline TrotterDiagnostics verify_magnus(const GateSequence& seq, double beta, const FerroHamiltonian& h,
                                        int cap = kDefaultDenseCap) {
  detail::check_dense_cap(seq.n, cap);
  if (seq.n != h.n()) throw Error(ErrorCode::InvalidInput, "sequence and Hamiltonian disagree on n");
  TrotterDiagnostics diag;
  const double n2 = static_cast<double>(seq.n) * seq.n;
  const double r = seq.r;
  diag.q_bound = 2.0 * n2 * beta * beta / r + 2.0 * std::numbers::pi * 27.0 * std::pow(beta, 3) * n2 * n2 * n2 / (r * r);
  diag.magnus_bound = 2.0 * std::numbers::pi * std::pow(3.0 * beta * n2 / r, 3);

  const std::size_t dim = std::size_t{1} << seq.n;
  const auto half = static_cast<std::size_t>(seq.period_len);
  DenseMatrix hd = to_dense(h, cap);
  if (half == 0) {
    // Every factor is the identity; the product is exactly I = e^{0}.
    diag.q_norm = sym_norm(beta * hd);
    return diag;
  }

  const DenseMatrix c_first = ordered_product(seq, 0, half);  // = C^T
  const DenseMatrix period = ordered_product(seq, 0, 2 * half);
  diag.period_palindrome_gap = max_abs_diff(period, c_first.transpose() * c_first);

  DenseMatrix log_sum(dim);
  for (std::size_t k = 0; k < half; ++k) {
    const Gate& g = seq.gates[k];
    log_sum += 2.0 * sym_log(gate_matrix(g, seq.n));
    if (g.kind == GateKind::G || g.kind == GateKind::H) {
      const Prop1Norms pn{sym_norm(gate_error_g(g.t)), sym_norm(gate_error_h(g.t)), 0.0};
      diag.prop1_norms.push_back(pn);
    }
  }
  const DenseMatrix log_period = sym_log(period);
  diag.magnus_delta_norm = sym_norm(log_period - log_sum);
  diag.q_norm = sym_norm(r * log_period + beta * hd);
  return diag;
}

}  // namespace ferroqmc
