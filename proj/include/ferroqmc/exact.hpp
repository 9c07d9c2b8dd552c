#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ferroqmc/error.hpp"
#include "ferroqmc/graph.hpp"

namespace ferroqmc {

// Exact matching sums by vertex-pivot deletion-contraction. The lowest vertex
// v of the remaining set S is either left unmatched or matched through one of
// its edges:
//
//   Z(S) = Z(S - v) + sum_{e=(v,u), u in S} w(e) x Z(S - v - u)
//
// memoised on the bitmask of S. Numbering vertices along the circuit keeps the
// number of distinct S small for compiled graphs.

inline constexpr int kMaxExactVertices = 64;
inline constexpr std::size_t kDefaultMemoBudget = 20'000'000;

struct MatchingLadder {
  std::vector<double> z;  // z[k] = Z_k, k = 0..floor(|V|/2)
  double total = 0.0;     // Z = sum_k z[k]

  int levels() const noexcept { return static_cast<int>(z.size()) - 1; }

  std::vector<double> log_z() const {
    std::vector<double> out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k)
      out[k] = z[k] > 0.0 ? std::log(z[k]) : -std::numeric_limits<double>::infinity();
    return out;
  }
};

namespace detail {

class MatchingOracle {
 public:
  MatchingOracle(const WeightedMultigraph& g, std::size_t memo_budget) : budget_(memo_budget) {
    if (g.num_vertices() > kMaxExactVertices)
      throw Error(ErrorCode::TooLarge, "exact matching sums support at most 64 vertices");
    nbrs_.resize(static_cast<std::size_t>(g.num_vertices()));
    for (const Edge& e : g.edges()) {
      // Each edge is recorded once, at its lower endpoint, since the pivot is
      // always the lowest remaining vertex.
      const int lo = std::min(e.u, e.v), hi = std::max(e.u, e.v);
      nbrs_[static_cast<std::size_t>(lo)].push_back({hi, e.w});
    }
    full_ = g.num_vertices() == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << g.num_vertices()) - 1);
  }

  std::uint64_t full() const noexcept { return full_; }

  double perfect(std::uint64_t s) {
    if (s == 0) return 1.0;
    if (std::popcount(s) & 1) return 0.0;
    if (auto it = pm_memo_.find(s); it != pm_memo_.end()) return it->second;
    const int v = std::countr_zero(s);
    const std::uint64_t rest = s & ~(std::uint64_t{1} << v);
    double acc = 0.0;
    for (const auto& [u, w] : nbrs_[static_cast<std::size_t>(v)])
      if (rest & (std::uint64_t{1} << u)) acc += w * perfect(rest & ~(std::uint64_t{1} << u));
    remember(pm_memo_, s, acc);
    return acc;
  }

  const std::vector<double>& ladder(std::uint64_t s) {
    static const std::vector<double> kOne{1.0};
    if (s == 0) return kOne;
    if (auto it = ladder_memo_.find(s); it != ladder_memo_.end()) return it->second;
    const int v = std::countr_zero(s);
    const std::uint64_t rest = s & ~(std::uint64_t{1} << v);
    std::vector<double> acc(static_cast<std::size_t>(std::popcount(s) / 2 + 1), 0.0);
    {
      const std::vector<double>& skip = ladder(rest);
      for (std::size_t k = 0; k < skip.size(); ++k) acc[k] += skip[k];
    }
    for (const auto& [u, w] : nbrs_[static_cast<std::size_t>(v)]) {
      if (!(rest & (std::uint64_t{1} << u))) continue;
      const std::vector<double>& sub = ladder(rest & ~(std::uint64_t{1} << u));
      for (std::size_t k = 0; k < sub.size(); ++k) acc[k + 1] += w * sub[k];
    }
    if (ladder_memo_.size() >= budget_) throw Error(ErrorCode::TooLarge, "matching ladder memo budget exhausted");
    return ladder_memo_.emplace(s, std::move(acc)).first->second;
  }

 private:
  void remember(std::unordered_map<std::uint64_t, double>& memo, std::uint64_t s, double value) {
    if (memo.size() >= budget_) throw Error(ErrorCode::TooLarge, "perfect matching memo budget exhausted");
    memo.emplace(s, value);
  }

  struct Nbr {
    int u;
    double w;
  };
  std::vector<std::vector<Nbr>> nbrs_;
  std::uint64_t full_ = 0;
  std::size_t budget_;
  std::unordered_map<std::uint64_t, double> pm_memo_;
  std::unordered_map<std::uint64_t, std::vector<double>> ladder_memo_;
};

}  // namespace detail

inline MatchingLadder matching_ladder(const WeightedMultigraph& g, std::size_t memo_budget = kDefaultMemoBudget) {
  detail::MatchingOracle oracle(g, memo_budget);
  MatchingLadder out;
  out.z = oracle.ladder(oracle.full());
  out.z.resize(static_cast<std::size_t>(g.num_vertices() / 2 + 1), 0.0);
  for (double x : out.z) out.total += x;
  return out;
}

inline double perfmatch_exact(const WeightedMultigraph& g, std::size_t memo_budget = kDefaultMemoBudget) {
  if (g.num_vertices() % 2 != 0) throw Error(ErrorCode::OddVertexCount, "perfect matchings need an even vertex count");
  detail::MatchingOracle oracle(g, memo_budget);
  return oracle.perfect(oracle.full());
}

inline double nearperfmatch_exact(const WeightedMultigraph& g, std::size_t memo_budget = kDefaultMemoBudget) {
  if (g.num_vertices() % 2 != 0) throw Error(ErrorCode::OddVertexCount, "near-perfect matchings need an even vertex count");
  if (g.num_vertices() == 0) return 0.0;
  const MatchingLadder ladder = matching_ladder(g, memo_budget);
  return ladder.z[ladder.z.size() - 2];
}

/// Weight of the near-perfect matchings leaving exactly u and v uncovered:
/// the perfect-matching sum of the graph with u and v deleted.
inline double omega_exact(const WeightedMultigraph& g, int u, int v, std::size_t memo_budget = kDefaultMemoBudget) {
  g.check_vertex(u);
  g.check_vertex(v);
  if (u == v) throw Error(ErrorCode::InvalidInput, "omega needs two distinct vertices", u, v);
  if (g.num_vertices() % 2 != 0) throw Error(ErrorCode::OddVertexCount, "omega needs an even vertex count");
  detail::MatchingOracle oracle(g, memo_budget);
  return oracle.perfect(oracle.full() & ~(std::uint64_t{1} << u) & ~(std::uint64_t{1} << v));
}

/// Omega_{u,v} for every pair u < v, sharing one memo table.
inline std::vector<std::vector<double>> omega_table(const WeightedMultigraph& g,
                                                    std::size_t memo_budget = kDefaultMemoBudget) {
  if (g.num_vertices() % 2 != 0) throw Error(ErrorCode::OddVertexCount, "omega needs an even vertex count");
  detail::MatchingOracle oracle(g, memo_budget);
  const auto nv = static_cast<std::size_t>(g.num_vertices());
  std::vector<std::vector<double>> out(nv, std::vector<double>(nv, 0.0));
  for (std::size_t u = 0; u < nv; ++u)
    for (std::size_t v = u + 1; v < nv; ++v)
      out[u][v] = out[v][u] = oracle.perfect(oracle.full() & ~(std::uint64_t{1} << u) & ~(std::uint64_t{1} << v));
  return out;
}

struct LogConcavityResult {
  bool holds = true;
  std::optional<int> violating_k;  // first k with Z_k^2 < Z_{k-1} Z_{k+1}
  bool ratios_monotone = true;     // Z_{k-1}/Z_k nondecreasing over the nonzero range
};

/// Checks Z_k^2 >= Z_{k-1} Z_{k+1} for 1 <= k <= N-1 up to a relative
/// round-off allowance.
inline LogConcavityResult check_log_concavity(const MatchingLadder& ladder, double rel_tol = 1e-12) {
  LogConcavityResult out;
  const auto& z = ladder.z;
  for (std::size_t k = 1; k + 1 < z.size(); ++k) {
    if (z[k] * z[k] < z[k - 1] * z[k + 1] * (1.0 - rel_tol)) {
      out.holds = false;
      out.violating_k = static_cast<int>(k);
      break;
    }
  }
  double prev = -1.0;
  for (std::size_t k = 1; k < z.size() && z[k] > 0.0; ++k) {
    const double ratio = z[k - 1] / z[k];
    if (ratio < prev * (1.0 - rel_tol)) out.ratios_monotone = false;
    prev = ratio;
  }
  return out;
}

inline LogConcavityResult check_log_concavity(const WeightedMultigraph& g) {
  return check_log_concavity(matching_ladder(g));
}

}  // namespace ferroqmc
