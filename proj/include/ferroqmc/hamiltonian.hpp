#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ferroqmc/error.hpp"
#include "ferroqmc/linalg.hpp"

namespace ferroqmc {

// Qubits are 1-based throughout the public API. Qubit i occupies bit i-1 of a
// computational basis index, and |0> is the +1 eigenvector of Z.

inline constexpr int kDefaultDenseCap = 10;

struct PairCoupling {
  int i = 0;
  int j = 0;
  double b = 0.0;
  double c = 0.0;
};

/// Unvalidated coefficients as read from a file or built by hand.
struct RawCoefficients {
  int n = 0;
  std::vector<PairCoupling> pairs;  // omitted pairs mean b = c = 0
  std::vector<double> d;            // size n
};

class FerroHamiltonian;
inline FerroHamiltonian validate(const RawCoefficients& raw);

/// Ferromagnetic XY-type Hamiltonian
///   H = sum_{i<j} (-b_ij X_i X_j + c_ij Y_i Y_j) + sum_i d_i (I + Z_i)
/// with |c_ij| <= b_ij <= 1 and |d_i| <= 1. Only constructible via validate().
class FerroHamiltonian {
 public:
  int n() const noexcept { return n_; }

  double b(int i, int j) const { return b_[pair_index(i, j)]; }
  double c(int i, int j) const { return c_[pair_index(i, j)]; }
  double d(int i) const { return d_[static_cast<std::size_t>(i - 1)]; }

  /// Nonzero pairs in lexicographic order.
  std::vector<PairCoupling> pairs() const {
    std::vector<PairCoupling> out;
    for (int i = 1; i <= n_; ++i)
      for (int j = i + 1; j <= n_; ++j)
        if (b(i, j) != 0.0 || c(i, j) != 0.0) out.push_back({i, j, b(i, j), c(i, j)});
    return out;
  }

  /// Crude norm bound sum(b + |c|) + 2 sum |d| on every eigenvalue.
  double norm_bound() const {
    double s = 0.0;
    for (std::size_t k = 0; k < b_.size(); ++k) s += b_[k] + std::abs(c_[k]);
    for (double x : d_) s += 2.0 * std::abs(x);
    return s;
  }

 private:
  friend FerroHamiltonian validate(const RawCoefficients& raw);

  std::size_t pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 1 || j > n_ || i == j)
      throw Error(ErrorCode::InvalidInput, "pair index out of range", i, j);
    return static_cast<std::size_t>((i - 1) * n_ + (j - 1));
  }

  int n_ = 0;
  std::vector<double> b_;
  std::vector<double> c_;
  std::vector<double> d_;
};

inline FerroHamiltonian validate(const RawCoefficients& raw) {
  if (raw.n < 1) throw Error(ErrorCode::InvalidInput, "qubit count must be positive");
  if (raw.d.size() != static_cast<std::size_t>(raw.n))
    throw Error(ErrorCode::InvalidInput,
                "d has " + std::to_string(raw.d.size()) + " entries, expected " + std::to_string(raw.n));

  FerroHamiltonian h;
  h.n_ = raw.n;
  const auto nn = static_cast<std::size_t>(raw.n) * static_cast<std::size_t>(raw.n);
  h.b_.assign(nn, 0.0);
  h.c_.assign(nn, 0.0);
  h.d_ = raw.d;

  std::vector<char> seen(nn, 0);
  for (const PairCoupling& p : raw.pairs) {
    int i = p.i, j = p.j;
    if (i < 1 || j < 1 || i > raw.n || j > raw.n || i == j)
      throw Error(ErrorCode::InvalidInput, "pair (" + std::to_string(i) + "," + std::to_string(j) + ") is not a valid qubit pair", i, j);
    if (i > j) std::swap(i, j);
    const std::size_t k = h.pair_index(i, j);
    if (seen[k]) throw Error(ErrorCode::InvalidInput, "duplicate pair", i, j);
    seen[k] = 1;
    if (!std::isfinite(p.b) || !std::isfinite(p.c) || p.b < 0.0 || p.b > 1.0 || std::abs(p.c) > 1.0)
      throw Error(ErrorCode::OutOfRange,
                  "coefficients of pair (" + std::to_string(i) + "," + std::to_string(j) + ") leave [0,1] / [-1,1]", i, j);
    if (std::abs(p.c) > p.b)
      throw Error(ErrorCode::NotFerromagnetic,
                  "|c| > b on pair (" + std::to_string(i) + "," + std::to_string(j) + ")", i, j);
    h.b_[k] = p.b;
    h.c_[k] = p.c;
  }
  for (int i = 1; i <= raw.n; ++i) {
    const double di = raw.d[static_cast<std::size_t>(i - 1)];
    if (!std::isfinite(di) || std::abs(di) > 1.0)
      throw Error(ErrorCode::OutOfRange, "d_" + std::to_string(i) + " leaves [-1,1]", i);
  }
  return h;
}

/// p_ij = (b_ij - c_ij)/2 weights the -(XX + YY) part, q_ij = (b_ij + c_ij)/2
/// weights the -(XX - YY) part.
class SplitCoefficients {
 public:
  explicit SplitCoefficients(const FerroHamiltonian& h) : n_(h.n()) {
    const auto nn = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
    p_.assign(nn, 0.0);
    q_.assign(nn, 0.0);
    for (int i = 1; i <= n_; ++i)
      for (int j = i + 1; j <= n_; ++j) {
        const std::size_t k = index(i, j);
        p_[k] = 0.5 * (h.b(i, j) - h.c(i, j));
        q_[k] = 0.5 * (h.b(i, j) + h.c(i, j));
      }
  }

  int n() const noexcept { return n_; }
  double p(int i, int j) const { return p_[index(i, j)]; }
  double q(int i, int j) const { return q_[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>((i - 1) * n_ + (j - 1));
  }

  int n_;
  std::vector<double> p_;
  std::vector<double> q_;
};

inline SplitCoefficients split_coefficients(const FerroHamiltonian& h) { return SplitCoefficients(h); }

namespace detail {

inline void check_dense_cap(int n, int cap) {
  if (n > cap)
    throw Error(ErrorCode::DimensionTooLarge,
                std::to_string(n) + " qubits exceeds the dense cap of " + std::to_string(cap));
}

inline double z_sign(std::uint64_t x, int qubit) { return ((x >> (qubit - 1)) & 1u) ? -1.0 : 1.0; }

}  // namespace detail

inline DenseMatrix to_dense(const FerroHamiltonian& h, int cap = kDefaultDenseCap) {
  detail::check_dense_cap(h.n(), cap);
  const std::size_t dim = std::size_t{1} << h.n();
  DenseMatrix m(dim);
  const auto pairs = h.pairs();
  for (std::uint64_t x = 0; x < dim; ++x) {
    double diag = 0.0;
    for (int i = 1; i <= h.n(); ++i) diag += h.d(i) * (1.0 + detail::z_sign(x, i));
    m(x, x) = diag;
    for (const PairCoupling& p : pairs) {
      const std::uint64_t y = x ^ (std::uint64_t{1} << (p.i - 1)) ^ (std::uint64_t{1} << (p.j - 1));
      // <y|Y_i Y_j|x> = -s_i s_j with s = +1 on |0>, -1 on |1>
      const double yy = -detail::z_sign(x, p.i) * detail::z_sign(x, p.j);
      m(y, x) += -p.b + p.c * yy;
    }
  }
  return m;
}

/// All 2^n eigenvalues of H, ascending.
inline std::vector<double> spectrum(const FerroHamiltonian& h, int cap = kDefaultDenseCap) {
  return symmetric_eigen(to_dense(h, cap)).values;
}

/// log Tr e^{-beta H}, evaluated as a shifted log-sum-exp.
inline double exact_log_partition(const FerroHamiltonian& h, double beta, int cap = kDefaultDenseCap) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidInput, "beta must be positive");
  const std::vector<double> e = spectrum(h, cap);
  const double e0 = e.front();
  double s = 0.0;
  for (double ek : e) s += std::exp(-beta * (ek - e0));
  return -beta * e0 + std::log(s);
}

inline double exact_partition(const FerroHamiltonian& h, double beta, int cap = kDefaultDenseCap) {
  return std::exp(exact_log_partition(h, beta, cap));
}

inline double exact_free_energy(const FerroHamiltonian& h, double beta, int cap = kDefaultDenseCap) {
  return -exact_log_partition(h, beta, cap) / beta;
}

inline double exact_ground_energy(const FerroHamiltonian& h, int cap = kDefaultDenseCap) {
  return spectrum(h, cap).front();
}

}  // namespace ferroqmc
