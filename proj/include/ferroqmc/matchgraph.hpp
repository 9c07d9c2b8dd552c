#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "ferroqmc/error.hpp"
#include "ferroqmc/exact.hpp"
#include "ferroqmc/graph.hpp"
#include "ferroqmc/linalg.hpp"
#include "ferroqmc/trotter.hpp"

namespace ferroqmc {

/// A weighted graph with distinguished vertices. inputs[k] and outputs[k]
/// carry the k-th qubit of the gate. For x in {0,1}^{2m} the matrix element
/// <out bits|G|in bits> is the perfect-matching sum of the graph with every
/// distinguished vertex whose bit is 1 deleted.
struct Gadget {
  WeightedMultigraph graph;
  std::vector<int> inputs;
  std::vector<int> outputs;

  int arity() const noexcept { return static_cast<int>(inputs.size()); }
};

/// f(t): a single in-out edge of weight t.
///
/// g(t): 4-cycle in1 -t- in2 -1- out2 -t- out1 -1- in1, i.e. the two t edges
/// join the inputs and the outputs, the unit edges run along each qubit.
///
/// h(t): the same square with the second qubit moved onto pendant vertices,
///   in2 -1- a -t- in1 -1- out1 -t- d -1- out2,  plus a -1- d.
inline Gadget gadget_for(const Gate& g, int gate_index = -1) {
  Gadget gd;
  auto& gr = gd.graph;
  auto vertex = [&](VertexRole role, int qubit, int slot) {
    return gr.add_vertex({gate_index, role, qubit, slot});
  };
  switch (g.kind) {
    case GateKind::F: {
      const int in = vertex(VertexRole::In, g.first, 0);
      const int out = vertex(VertexRole::Out, g.first, 1);
      gr.add_edge(in, out, g.t);
      gd.inputs = {in};
      gd.outputs = {out};
      break;
    }
    case GateKind::G: {
      const int in1 = vertex(VertexRole::In, g.first, 0);
      const int in2 = vertex(VertexRole::In, g.second, 1);
      const int out1 = vertex(VertexRole::Out, g.first, 2);
      const int out2 = vertex(VertexRole::Out, g.second, 3);
      gr.add_edge(in1, in2, g.t);
      gr.add_edge(out1, out2, g.t);
      gr.add_edge(in1, out1, 1.0);
      gr.add_edge(in2, out2, 1.0);
      gd.inputs = {in1, in2};
      gd.outputs = {out1, out2};
      break;
    }
    case GateKind::H: {
      const int in1 = vertex(VertexRole::In, g.first, 0);
      const int in2 = vertex(VertexRole::In, g.second, 1);
      const int a = vertex(VertexRole::Internal, 0, 2);
      const int d = vertex(VertexRole::Internal, 0, 3);
      const int out1 = vertex(VertexRole::Out, g.first, 4);
      const int out2 = vertex(VertexRole::Out, g.second, 5);
      gr.add_edge(a, in1, g.t);
      gr.add_edge(out1, d, g.t);
      gr.add_edge(in1, out1, 1.0);
      gr.add_edge(a, d, 1.0);
      gr.add_edge(in2, a, 1.0);
      gr.add_edge(d, out2, 1.0);
      gd.inputs = {in1, in2};
      gd.outputs = {out1, out2};
      break;
    }
  }
  return gd;
}

/// Matrix implemented by a gadget (arity <= 2), evaluated by exact
/// perfect-matching sums of the induced subgraphs.
inline DenseMatrix implemented_gate(const Gadget& gd) {
  const int m = gd.arity();
  if (m < 1 || m > 2 || static_cast<int>(gd.outputs.size()) != m)
    throw Error(ErrorCode::InvalidInput, "implemented_gate supports one- and two-qubit gadgets");
  const std::size_t dim = std::size_t{1} << m;
  DenseMatrix out(dim);
  // Local basis index 2a + b: qubit 0 of the gadget is the more significant bit.
  auto bit = [m](std::size_t idx, int k) { return (idx >> (m - 1 - k)) & 1u; };
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t col = 0; col < dim; ++col) {
      std::vector<bool> keep(static_cast<std::size_t>(gd.graph.num_vertices()), true);
      for (int k = 0; k < m; ++k) {
        if (bit(col, k)) keep[static_cast<std::size_t>(gd.inputs[static_cast<std::size_t>(k)])] = false;
        if (bit(row, k)) keep[static_cast<std::size_t>(gd.outputs[static_cast<std::size_t>(k)])] = false;
      }
      const WeightedMultigraph sub = induced_subgraph(gd.graph, keep);
      out(row, col) = sub.num_vertices() % 2 ? 0.0 : perfmatch_exact(sub);
    }
  }
  return out;
}

/// Pendant weight-1 edge (u, u0) for each listed vertex.
inline WeightedMultigraph add_dangling(const WeightedMultigraph& g, std::span<const int> at) {
  WeightedMultigraph out = g;
  for (int u : at) {
    g.check_vertex(u);
    const VertexLabel& l = g.label(u);
    const int u0 = out.add_vertex({l.gate_index, VertexRole::Dangling, l.qubit, u});
    out.add_edge(u, u0, 1.0, EdgeTag::Dangling);
  }
  return out;
}

/// Gamma'_{u,v}: perfect matchings of the result correspond to near-perfect
/// matchings of g missing exactly u and v.
inline WeightedMultigraph add_dangling(const WeightedMultigraph& g, int u, int v) {
  if (u == v) throw Error(ErrorCode::InvalidInput, "dangling edges need distinct vertices", u, v);
  const int at[] = {u, v};
  return add_dangling(g, std::span<const int>(at));
}

inline Gadget with_dangling(const Gadget& gd, std::initializer_list<int> at) {
  return {add_dangling(gd.graph, std::span<const int>(at.begin(), at.size())), gd.inputs, gd.outputs};
}

/// Number of qubits no gate touches; each contributes a factor 2 to the trace.
inline int idle_qubit_count(const GateSequence& seq) {
  int idle = 0;
  for (int q = 1; q <= seq.n; ++q) {
    bool used = false;
    for (const Gate& g : seq.gates)
      if (g.acts_on(q)) { used = true; break; }
    if (!used) ++idle;
  }
  return idle;
}

/// One gadget per gate, laid out in circuit order, then for every active qubit
/// a weight-1 external edge from each output to the next input on that qubit
/// and a wrap edge from the last output back to the first input. The
/// perfect-matching sum of the result equals Tr[G_J ... G_1] restricted to the
/// active qubits.
inline WeightedMultigraph compile_circuit(const GateSequence& seq) {
  if (seq.empty()) throw Error(ErrorCode::EmptyCircuit, "circuit has no gates; its trace is 2^n");
  WeightedMultigraph out;
  std::vector<std::vector<std::pair<int, int>>> wires(static_cast<std::size_t>(seq.n) + 1);
  for (std::size_t gi = 0; gi < seq.gates.size(); ++gi) {
    const Gate& g = seq.gates[gi];
    detail::check_gate_qubits(g, seq.n);
    const Gadget gd = gadget_for(g, static_cast<int>(gi));
    const int offset = out.num_vertices();
    for (const VertexLabel& l : gd.graph.labels()) out.add_vertex(l);
    for (const Edge& e : gd.graph.edges()) out.add_edge(e.u + offset, e.v + offset, e.w, EdgeTag::Internal);
    const int qubits[] = {g.first, g.second};
    for (int k = 0; k < gd.arity(); ++k)
      wires[static_cast<std::size_t>(qubits[k])].push_back(
          {gd.inputs[static_cast<std::size_t>(k)] + offset, gd.outputs[static_cast<std::size_t>(k)] + offset});
  }
  for (const auto& wire : wires) {
    if (wire.empty()) continue;
    for (std::size_t k = 0; k + 1 < wire.size(); ++k) out.add_edge(wire[k].second, wire[k + 1].first, 1.0, EdgeTag::External);
    out.add_edge(wire.back().second, wire.front().first, 1.0, EdgeTag::External);
  }
  return out;
}

}  // namespace ferroqmc
