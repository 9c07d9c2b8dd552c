#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "ferroqmc/error.hpp"
#include "ferroqmc/graph.hpp"
#include "ferroqmc/linalg.hpp"
#include "ferroqmc/rng.hpp"

namespace ferroqmc {

// Metropolis chain on all matchings of a weighted graph, stationary law
// W(M)/Z with W(M) = prod_{e in M} alpha w(e). Each step holds with
// probability 1/2; otherwise an edge e = (u, v) is drawn uniformly and
//   e in M                  -> propose M - e
//   u, v both unmatched     -> propose M + e
//   one endpoint matched by e' -> propose M + e - e'
//   otherwise               -> stay
// and the proposal is accepted with probability min(1, W(M')/W(M)).

enum class SamplerMode { Theory, Practical };

inline std::string_view to_string(SamplerMode m) { return m == SamplerMode::Theory ? "theory" : "practical"; }

struct SamplerConfig {
  long long steps = 1;
  SamplerMode mode = SamplerMode::Practical;
  std::uint64_t seed = 0;
};

/// Edge ids of a matching, kept sorted.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::vector<int> edges) : edges_(std::move(edges)) { std::sort(edges_.begin(), edges_.end()); }

  std::span<const int> edges() const noexcept { return edges_; }
  int size() const noexcept { return static_cast<int>(edges_.size()); }
  bool contains(int e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

  /// True when no two member edges share a vertex.
  bool valid_for(const WeightedMultigraph& g) const {
    std::vector<char> used(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int e : edges_) {
      if (e < 0 || e >= g.num_edges()) return false;
      const Edge& ed = g.edge(e);
      if (used[static_cast<std::size_t>(ed.u)] || used[static_cast<std::size_t>(ed.v)]) return false;
      used[static_cast<std::size_t>(ed.u)] = used[static_cast<std::size_t>(ed.v)] = 1;
    }
    return true;
  }

  double weight(const WeightedMultigraph& g, double alpha = 1.0) const {
    double w = 1.0;
    for (int e : edges_) w *= alpha * g.edge(e).w;
    return w;
  }

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;

 private:
  std::vector<int> edges_;
};

enum class MoveKind { Hold, Delete, Add, Shift, Blocked };

struct Move {
  MoveKind kind = MoveKind::Blocked;
  int edge = -1;     // the drawn edge
  int evicted = -1;  // e' for a shift
  double ratio = 1.0;  // W(M')/W(M)
};

struct SamplerStats {
  long long steps = 0;
  long long holds = 0;
  long long blocked = 0;
  long long proposed[3] = {0, 0, 0};  // delete, add, shift
  long long accepted[3] = {0, 0, 0};

  double acceptance_rate() const {
    const long long p = proposed[0] + proposed[1] + proposed[2];
    return p == 0 ? 0.0 : static_cast<double>(accepted[0] + accepted[1] + accepted[2]) / static_cast<double>(p);
  }

  SamplerStats& operator+=(const SamplerStats& o) {
    steps += o.steps;
    holds += o.holds;
    blocked += o.blocked;
    for (int k = 0; k < 3; ++k) {
      proposed[k] += o.proposed[k];
      accepted[k] += o.accepted[k];
    }
    return *this;
  }
};

/// Mutable chain state: mate[v] is the edge covering v, or -1.
class ChainState {
 public:
  ChainState(const WeightedMultigraph& g, double alpha = 1.0) : alpha_(alpha) {
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidInput, "weight multiplier must be positive");
    const auto ne = static_cast<std::size_t>(g.num_edges());
    eu_.resize(ne);
    ev_.resize(ne);
    ew_.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) {
      eu_[e] = g.edge(static_cast<int>(e)).u;
      ev_[e] = g.edge(static_cast<int>(e)).v;
      ew_[e] = g.edge(static_cast<int>(e)).w;
    }
    mate_.assign(static_cast<std::size_t>(g.num_vertices()), -1);
  }

  ChainState(const WeightedMultigraph& g, const Matching& m, double alpha) : ChainState(g, alpha) {
    if (!m.valid_for(g)) throw Error(ErrorCode::InvalidInput, "initial state is not a matching");
    for (int e : m.edges()) insert(e);
  }

  int size() const noexcept { return size_; }
  int num_edges() const noexcept { return static_cast<int>(eu_.size()); }
  double alpha() const noexcept { return alpha_; }

  /// The move an edge draw would propose from the current state.
  Move classify(int e) const {
    const auto ue = static_cast<std::size_t>(eu_[static_cast<std::size_t>(e)]);
    const auto ve = static_cast<std::size_t>(ev_[static_cast<std::size_t>(e)]);
    const int mu = mate_[ue], mv = mate_[ve];
    const double we = ew_[static_cast<std::size_t>(e)];
    if (mu == e) return {MoveKind::Delete, e, -1, 1.0 / (alpha_ * we)};
    if (mu < 0 && mv < 0) return {MoveKind::Add, e, -1, alpha_ * we};
    if ((mu < 0) != (mv < 0)) {
      const int other = mu < 0 ? mv : mu;
      return {MoveKind::Shift, e, other, we / ew_[static_cast<std::size_t>(other)]};
    }
    return {MoveKind::Blocked, e, -1, 1.0};
  }

  void apply(const Move& m) {
    switch (m.kind) {
      case MoveKind::Delete: erase(m.edge); break;
      case MoveKind::Add: insert(m.edge); break;
      case MoveKind::Shift:
        erase(m.evicted);
        insert(m.edge);
        break;
      default: break;
    }
  }

  template <class Engine>
  void step(Engine& rng, SamplerStats* stats = nullptr) {
    const auto ne = static_cast<std::uint64_t>(eu_.size());
    if (stats) ++stats->steps;
    if (ne == 0) {
      if (stats) ++stats->holds;
      return;
    }
    const std::uint64_t draw = std::uniform_int_distribution<std::uint64_t>(0, 2 * ne - 1)(rng);
    if (draw >= ne) {
      if (stats) ++stats->holds;
      return;
    }
    const Move mv = classify(static_cast<int>(draw));
    if (mv.kind == MoveKind::Blocked) {
      if (stats) ++stats->blocked;
      return;
    }
    const int slot = static_cast<int>(mv.kind) - static_cast<int>(MoveKind::Delete);
    if (stats) ++stats->proposed[slot];
    if (mv.ratio >= 1.0 || std::generate_canonical<double, 53>(rng) < mv.ratio) {
      apply(mv);
      if (stats) ++stats->accepted[slot];
    }
  }

  Matching matching() const {
    std::vector<int> edges;
    for (std::size_t v = 0; v < mate_.size(); ++v) {
      const int e = mate_[v];
      if (e >= 0 && static_cast<std::size_t>(eu_[static_cast<std::size_t>(e)]) == v) edges.push_back(e);
    }
    return Matching(std::move(edges));
  }

  /// Every covered vertex points at an edge that covers it and no vertex is
  /// covered twice.
  bool consistent() const {
    int count = 0;
    for (std::size_t v = 0; v < mate_.size(); ++v) {
      const int e = mate_[v];
      if (e < 0) continue;
      const auto ue = static_cast<std::size_t>(eu_[static_cast<std::size_t>(e)]);
      const auto ve = static_cast<std::size_t>(ev_[static_cast<std::size_t>(e)]);
      if (ue != v && ve != v) return false;
      if (mate_[ue] != e || mate_[ve] != e) return false;
      ++count;
    }
    return count == 2 * size_;
  }

 private:
  void insert(int e) {
    mate_[static_cast<std::size_t>(eu_[static_cast<std::size_t>(e)])] = e;
    mate_[static_cast<std::size_t>(ev_[static_cast<std::size_t>(e)])] = e;
    ++size_;
  }
  void erase(int e) {
    mate_[static_cast<std::size_t>(eu_[static_cast<std::size_t>(e)])] = -1;
    mate_[static_cast<std::size_t>(ev_[static_cast<std::size_t>(e)])] = -1;
    --size_;
  }

  double alpha_;
  std::vector<int> eu_, ev_;
  std::vector<double> ew_;
  std::vector<int> mate_;
  int size_ = 0;
};

/// One transition of the chain on Gamma(alpha) from m.
template <class Engine>
Matching chain_step(const WeightedMultigraph& g, const Matching& m, Engine& rng, double alpha = 1.0) {
  ChainState s(g, m, alpha);
  s.step(rng);
  return s.matching();
}

/// cfg.steps transitions from the empty matching on Gamma(alpha).
template <class Engine>
Matching sample(const WeightedMultigraph& g, const SamplerConfig& cfg, Engine& rng, double alpha = 1.0,
                SamplerStats* stats = nullptr) {
  if (cfg.steps < 1) throw Error(ErrorCode::InvalidInput, "sampler needs at least one step");
  ChainState s(g, alpha);
  for (long long k = 0; k < cfg.steps; ++k) {
    s.step(rng, stats);
#ifndef NDEBUG
    if (!s.consistent()) throw Error(ErrorCode::InvalidInput, "chain left the matching space");
#endif
  }
  return s.matching();
}

/// Step budget for one sample.
///   theory:    c_T (|E|^3 |V| w_max^4 max(1, log(w_max/w_min)) + |E|^2 w_max^4 log(1/delta))
///   practical: c_P |E| |V| log(1/delta)
/// w_max and w_min are taken over Gamma(alpha).
struct StepBudget {
  double c_theory = 1.0;
  double c_practical = 50.0;
};

inline long long default_steps(const WeightedMultigraph& g, double delta, SamplerMode mode, double alpha = 1.0,
                               StepBudget budget = {}) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidInput, "delta must lie in (0,1)");
  const double ne = g.num_edges(), nv = g.num_vertices();
  const double log_inv_delta = std::log(1.0 / delta);
  double steps;
  if (mode == SamplerMode::Theory) {
    double w_max = 1.0, w_min = 1.0;
    for (const Edge& e : g.edges()) {
      w_max = std::max(w_max, alpha * e.w);
      w_min = std::min(w_min, alpha * e.w);
    }
    const double w4 = std::pow(w_max, 4);
    steps = budget.c_theory * (ne * ne * ne * nv * w4 * std::max(1.0, std::log(w_max / w_min)) + ne * ne * w4 * log_inv_delta);
  } else {
    steps = budget.c_practical * ne * nv * log_inv_delta;
  }
  if (steps >= 9.0e18) return static_cast<long long>(9.0e18);
  return std::max(1LL, static_cast<long long>(std::ceil(steps)));
}

// ---------------------------------------------------------------------------
// Exact references for small graphs

/// Every matching of g, in lexicographic order of sorted edge lists.
inline std::vector<Matching> enumerate_matchings(const WeightedMultigraph& g, std::size_t limit = 10'000) {
  std::vector<Matching> out;
  std::vector<int> current;
  std::vector<char> used(static_cast<std::size_t>(g.num_vertices()), 0);
  auto rec = [&](auto&& self, int next) -> void {
    if (out.size() > limit) throw Error(ErrorCode::TooLarge, "too many matchings to enumerate");
    out.emplace_back(current);
    for (int e = next; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(e);
      if (used[static_cast<std::size_t>(ed.u)] || used[static_cast<std::size_t>(ed.v)]) continue;
      used[static_cast<std::size_t>(ed.u)] = used[static_cast<std::size_t>(ed.v)] = 1;
      current.push_back(e);
      self(self, e + 1);
      current.pop_back();
      used[static_cast<std::size_t>(ed.u)] = used[static_cast<std::size_t>(ed.v)] = 0;
    }
  };
  rec(rec, 0);
  if (out.size() > limit) throw Error(ErrorCode::TooLarge, "too many matchings to enumerate");
  std::sort(out.begin(), out.end());
  return out;
}

/// W(M)/Z for every matching M of Gamma(alpha).
inline std::map<Matching, double> stationary_exact(const WeightedMultigraph& g, double alpha = 1.0,
                                                   std::size_t limit = 10'000) {
  std::map<Matching, double> table;
  double z = 0.0;
  for (Matching& m : enumerate_matchings(g, limit)) {
    const double w = m.weight(g, alpha);
    z += w;
    table.emplace(std::move(m), w);
  }
  for (auto& [m, p] : table) p /= z;
  return table;
}

struct TransitionMatrix {
  std::vector<Matching> states;
  DenseMatrix p;  // p(i, j) = P(states[i] -> states[j])
};

/// Full transition matrix of the chain, built from the same move rule the
/// sampler executes.
inline TransitionMatrix transition_matrix(const WeightedMultigraph& g, double alpha = 1.0, std::size_t limit = 2'000) {
  TransitionMatrix tm;
  tm.states = enumerate_matchings(g, limit);
  const std::size_t ns = tm.states.size();
  tm.p = DenseMatrix(ns);
  const int ne = g.num_edges();
  std::map<Matching, std::size_t> index;
  for (std::size_t i = 0; i < ns; ++i) index.emplace(tm.states[i], i);
  for (std::size_t i = 0; i < ns; ++i) {
    if (ne == 0) {
      tm.p(i, i) = 1.0;
      continue;
    }
    tm.p(i, i) += 0.5;
    for (int e = 0; e < ne; ++e) {
      ChainState s(g, tm.states[i], alpha);
      const Move mv = s.classify(e);
      const double pick = 0.5 / ne;
      if (mv.kind == MoveKind::Blocked) {
        tm.p(i, i) += pick;
        continue;
      }
      const double acc = std::min(1.0, mv.ratio);
      s.apply(mv);
      tm.p(i, index.at(s.matching())) += pick * acc;
      tm.p(i, i) += pick * (1.0 - acc);
    }
  }
  return tm;
}

inline double total_variation(const std::map<Matching, double>& exact, const std::map<Matching, long long>& counts) {
  long long n = 0;
  for (const auto& [m, c] : counts) n += c;
  double tv = 0.0;
  for (const auto& [m, p] : exact) {
    const auto it = counts.find(m);
    const double q = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n);
    tv += std::abs(p - q);
  }
  for (const auto& [m, c] : counts)
    if (!exact.contains(m)) tv += static_cast<double>(c) / static_cast<double>(n);
  return 0.5 * tv;
}

// ---------------------------------------------------------------------------
// Batches of independent chains

/// count independent chains, chain i seeded from (seed, stream_path..., i).
/// Returns the final matching sizes; deterministic for any thread count.
inline std::vector<int> sample_sizes(const WeightedMultigraph& g, double alpha, long long steps, std::size_t count,
                                     std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b,
                                     unsigned threads, SamplerStats* stats = nullptr) {
  std::vector<int> sizes(count, 0);
  std::vector<SamplerStats> per(stats ? count : 0);
  parallel_for(count, threads, [&](std::size_t i) {
    Rng rng = make_rng(seed, {stream::kSampler, stream_a, stream_b, i});
    ChainState s(g, alpha);
    SamplerStats* st = stats ? &per[i] : nullptr;
    for (long long k = 0; k < steps; ++k) s.step(rng, st);
    sizes[i] = s.size();
  });
  if (stats)
    for (const SamplerStats& s : per) *stats += s;
  return sizes;
}

inline std::vector<Matching> sample_matchings(const WeightedMultigraph& g, const SamplerConfig& cfg, std::size_t count,
                                              unsigned threads, double alpha = 1.0) {
  std::vector<Matching> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    Rng rng = make_rng(cfg.seed, {stream::kSampler, 0, 0, i});
    out[i] = sample(g, cfg, rng, alpha);
  });
  return out;
}

}  // namespace ferroqmc
