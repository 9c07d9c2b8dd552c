#pragma once

// Independent reference constructions shared by the unit tests. Nothing here
// calls into the code path it is used to check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ferroqmc/graph.hpp"
#include "ferroqmc/hamiltonian.hpp"
#include "ferroqmc/linalg.hpp"

namespace ferroqmc::testing {

inline DenseMatrix mat2(double a, double b, double c, double d) {
  DenseMatrix m(2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

inline DenseMatrix pauli_i() { return mat2(1, 0, 0, 1); }
inline DenseMatrix pauli_x() { return mat2(0, 1, 1, 0); }
inline DenseMatrix pauli_z() { return mat2(1, 0, 0, -1); }
// Y = i A with A real; Y_i Y_j = -(A_i A_j).
inline DenseMatrix pauli_a() { return mat2(0, -1, 1, 0); }

/// Tensor product of one 2x2 factor per qubit; qubit i is bit i-1 so qubit n
/// is the most significant Kronecker factor.
inline DenseMatrix embed(int n, const std::vector<std::pair<int, DenseMatrix>>& factors) {
  DenseMatrix out = DenseMatrix::identity(1);
  for (int q = n; q >= 1; --q) {
    DenseMatrix f = pauli_i();
    for (const auto& [qq, m] : factors)
      if (qq == q) f = m;
    out = kron(out, f);
  }
  return out;
}

/// H assembled term by term from Kronecker products.
inline DenseMatrix hamiltonian_by_kron(const FerroHamiltonian& h) {
  const int n = h.n();
  DenseMatrix out(std::size_t{1} << n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      out += (-h.b(i, j)) * embed(n, {{i, pauli_x()}, {j, pauli_x()}});
      out += (-h.c(i, j)) * embed(n, {{i, pauli_a()}, {j, pauli_a()}});
    }
  for (int i = 1; i <= n; ++i)
    out += h.d(i) * (DenseMatrix::identity(std::size_t{1} << n) + embed(n, {{i, pauli_z()}}));
  return out;
}

inline FerroHamiltonian random_hamiltonian(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0), upm(-1.0, 1.0);
  RawCoefficients raw;
  raw.n = n;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const double b = u01(rng);
      raw.pairs.push_back({i, j, b, b * upm(rng)});
    }
  for (int i = 1; i <= n; ++i) raw.d.push_back(upm(rng));
  return validate(raw);
}

/// Brute force over every edge subset: z[k] is the total weight of the
/// k-edge matchings.
inline std::vector<double> ladder_by_subsets(const WeightedMultigraph& g) {
  const int ne = g.num_edges();
  std::vector<double> z(static_cast<std::size_t>(g.num_vertices() / 2 + 1), 0.0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ne); ++mask) {
    std::uint64_t used = 0;
    bool ok = true;
    double w = 1.0;
    int k = 0;
    for (int e = 0; e < ne && ok; ++e) {
      if (!(mask >> e & 1u)) continue;
      const Edge& ed = g.edge(e);
      const std::uint64_t bits = (std::uint64_t{1} << ed.u) | (std::uint64_t{1} << ed.v);
      if (used & bits) ok = false;
      used |= bits;
      w *= ed.w;
      ++k;
    }
    if (ok) z[static_cast<std::size_t>(k)] += w;
  }
  return z;
}

inline WeightedMultigraph random_graph(int nv, double p_edge, double w_lo, double w_hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0), uw(w_lo, w_hi);
  WeightedMultigraph g;
  for (int v = 0; v < nv; ++v) g.add_vertex();
  for (int a = 0; a < nv; ++a)
    for (int b = a + 1; b < nv; ++b)
      if (u01(rng) < p_edge) g.add_edge(a, b, uw(rng));
  return g;
}

inline WeightedMultigraph path_graph(int nv, double w = 1.0) {
  WeightedMultigraph g;
  for (int v = 0; v < nv; ++v) g.add_vertex();
  for (int v = 0; v + 1 < nv; ++v) g.add_edge(v, v + 1, w);
  return g;
}

inline WeightedMultigraph cycle_graph(int nv, double w = 1.0) {
  WeightedMultigraph g = path_graph(nv, w);
  g.add_edge(nv - 1, 0, w);
  return g;
}

}  // namespace ferroqmc::testing
