#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ferroqmc/error.hpp"

namespace ferroqmc {

enum class VertexRole { In, Out, Internal, Dangling };
enum class EdgeTag { Internal, External, Dangling };

inline std::string_view to_string(VertexRole r) {
  switch (r) {
    case VertexRole::In: return "in";
    case VertexRole::Out: return "out";
    case VertexRole::Internal: return "internal";
    case VertexRole::Dangling: return "dangling";
  }
  return "?";
}

inline std::string_view to_string(EdgeTag t) {
  switch (t) {
    case EdgeTag::Internal: return "internal";
    case EdgeTag::External: return "external";
    case EdgeTag::Dangling: return "dangling";
  }
  return "?";
}

/// Where a vertex came from: gate index in the circuit (-1 when not from a
/// gate), its role, the qubit it carries (0 if none) and a gadget-local slot.
struct VertexLabel {
  int gate_index = -1;
  VertexRole role = VertexRole::Internal;
  int qubit = 0;
  int slot = 0;

  friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
};

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
  EdgeTag tag = EdgeTag::Internal;

  int other(int x) const noexcept { return x == u ? v : u; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected multigraph with positive edge weights. Parallel edges keep
/// distinct identities (their index in edges()); self-loops are rejected.
class WeightedMultigraph {
 public:
  int add_vertex(VertexLabel label = {}) {
    labels_.push_back(label);
    incident_.emplace_back();
    return static_cast<int>(labels_.size()) - 1;
  }

  int add_edge(int u, int v, double w, EdgeTag tag = EdgeTag::Internal) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw Error(ErrorCode::InvalidInput, "self-loops are not allowed", u, v);
    if (!(w > 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::InvalidInput, "edge weights must be positive and finite", u, v);
    edges_.push_back({u, v, w, tag});
    const int id = static_cast<int>(edges_.size()) - 1;
    incident_[static_cast<std::size_t>(u)].push_back(id);
    incident_[static_cast<std::size_t>(v)].push_back(id);
    return id;
  }

  int num_vertices() const noexcept { return static_cast<int>(labels_.size()); }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

  const VertexLabel& label(int v) const { return labels_.at(static_cast<std::size_t>(v)); }
  const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const VertexLabel> labels() const noexcept { return labels_; }

  std::span<const int> incident(int v) const {
    check_vertex(v);
    return incident_[static_cast<std::size_t>(v)];
  }

  int degree(int v) const { return static_cast<int>(incident(v).size()); }

  double total_weight() const {
    double s = 0.0;
    for (const Edge& e : edges_) s += e.w;
    return s;
  }

  bool has_vertex(int v) const noexcept { return v >= 0 && v < num_vertices(); }

  void check_vertex(int v) const {
    if (!has_vertex(v)) throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v) + " does not exist", v);
  }

  friend bool operator==(const WeightedMultigraph& a, const WeightedMultigraph& b) {
    return a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<VertexLabel> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
};

/// Gamma(alpha): every edge weight multiplied by alpha.
inline WeightedMultigraph scaled(const WeightedMultigraph& g, double alpha) {
  WeightedMultigraph out;
  for (const VertexLabel& l : g.labels()) out.add_vertex(l);
  for (const Edge& e : g.edges()) out.add_edge(e.u, e.v, e.w * alpha, e.tag);
  return out;
}

/// Subgraph induced by the vertices with keep[v] true. Vertex ids are
/// compacted in order.
inline WeightedMultigraph induced_subgraph(const WeightedMultigraph& g, const std::vector<bool>& keep) {
  std::vector<int> remap(static_cast<std::size_t>(g.num_vertices()), -1);
  WeightedMultigraph out;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (keep[static_cast<std::size_t>(v)]) remap[static_cast<std::size_t>(v)] = out.add_vertex(g.label(v));
  for (const Edge& e : g.edges()) {
    const int a = remap[static_cast<std::size_t>(e.u)], b = remap[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) out.add_edge(a, b, e.w, e.tag);
  }
  return out;
}

struct GraphStats {
  int num_vertices = 0;
  int num_edges = 0;
  double w_max = 1.0;  // max{1, max w(e)}
  double w_min = 1.0;  // min{1, min w(e)}
};

inline GraphStats graph_stats(const WeightedMultigraph& g) {
  GraphStats s{g.num_vertices(), g.num_edges(), 1.0, 1.0};
  for (const Edge& e : g.edges()) {
    s.w_max = std::max(s.w_max, e.w);
    s.w_min = std::min(s.w_min, e.w);
  }
  return s;
}

}  // namespace ferroqmc
