#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ferroqmc/error.hpp"
#include "ferroqmc/estimator.hpp"
#include "ferroqmc/exact.hpp"
#include "ferroqmc/graph.hpp"
#include "ferroqmc/hamiltonian.hpp"
#include "ferroqmc/pipeline.hpp"
#include "ferroqmc/sampler.hpp"
#include "ferroqmc/trotter.hpp"

namespace ferroqmc::io {

using json = nlohmann::json;

namespace detail {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidInput, std::string("field \"") + key + "\" has the wrong type");
  }
}

// JSON has no infinities or NaNs.
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace detail

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------
// Hamiltonian: {"n": int, "pairs": [{"i","j","b","c"}], "d": [float]}

inline RawCoefficients raw_from_json(const json& j) {
  RawCoefficients raw;
  raw.n = detail::field<int>(j, "n");
  if (j.contains("pairs")) {
    if (!j["pairs"].is_array()) throw Error(ErrorCode::InvalidInput, "\"pairs\" must be an array");
    for (const json& p : j["pairs"])
      raw.pairs.push_back({detail::field<int>(p, "i"), detail::field<int>(p, "j"), detail::field<double>(p, "b"),
                           p.contains("c") ? detail::field<double>(p, "c") : 0.0});
  }
  if (j.contains("d")) raw.d = detail::field<std::vector<double>>(j, "d");
  else if (raw.n > 0) raw.d.assign(static_cast<std::size_t>(raw.n), 0.0);
  return raw;
}

inline FerroHamiltonian hamiltonian_from_json(const json& j) { return validate(raw_from_json(j)); }

inline json to_json(const FerroHamiltonian& h) {
  json pairs = json::array();
  for (const PairCoupling& p : h.pairs()) pairs.push_back({{"i", p.i}, {"j", p.j}, {"b", p.b}, {"c", p.c}});
  std::vector<double> d;
  for (int i = 1; i <= h.n(); ++i) d.push_back(h.d(i));
  return {{"n", h.n()}, {"pairs", pairs}, {"d", d}};
}

inline FerroHamiltonian load_hamiltonian(const std::string& path) { return hamiltonian_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Gate sequences

inline json to_json(const Gate& g) {
  json qubits = g.arity() == 1 ? json::array({g.first}) : json::array({g.first, g.second});
  return {{"kind", std::string(to_string(g.kind))}, {"qubits", qubits}, {"t", g.t}};
}

inline Gate gate_from_json(const json& j) {
  const std::string kind = detail::field<std::string>(j, "kind");
  const auto qubits = detail::field<std::vector<int>>(j, "qubits");
  Gate g;
  g.t = detail::field<double>(j, "t");
  if (kind == "f" && qubits.size() == 1) {
    g.kind = GateKind::F;
    g.first = qubits[0];
  } else if ((kind == "g" || kind == "h") && qubits.size() == 2) {
    g.kind = kind == "g" ? GateKind::G : GateKind::H;
    g.first = qubits[0];
    g.second = qubits[1];
  } else {
    throw Error(ErrorCode::InvalidInput, "bad gate \"" + kind + "\"");
  }
  if (!gate_in_range(g)) throw Error(ErrorCode::OutOfRange, "gate parameter outside the gate set", g.first, g.second);
  return g;
}

inline json to_json(const GateSequence& seq) {
  json gates = json::array();
  for (const Gate& g : seq.gates) gates.push_back(to_json(g));
  return {{"n", seq.n}, {"r", seq.r}, {"period_len", seq.period_len}, {"skipped", seq.skipped}, {"gates", gates}};
}

inline GateSequence sequence_from_json(const json& j) {
  GateSequence seq;
  seq.n = detail::field<int>(j, "n");
  if (seq.n < 1) throw Error(ErrorCode::InvalidInput, "n must be positive");
  seq.r = j.value("r", 0);
  seq.period_len = j.value("period_len", 0);
  seq.skipped = j.value("skipped", 0);
  for (const json& g : detail::field<json>(j, "gates")) {
    seq.gates.push_back(gate_from_json(g));
    ferroqmc::detail::check_gate_qubits(seq.gates.back(), seq.n);
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Graphs

inline json to_json(const VertexLabel& l) {
  return {{"gate", l.gate_index}, {"role", std::string(to_string(l.role))}, {"qubit", l.qubit}, {"slot", l.slot}};
}

inline VertexRole role_from_string(const std::string& s) {
  for (VertexRole r : {VertexRole::In, VertexRole::Out, VertexRole::Internal, VertexRole::Dangling})
    if (to_string(r) == s) return r;
  throw Error(ErrorCode::InvalidInput, "unknown vertex role \"" + s + "\"");
}

inline EdgeTag tag_from_string(const std::string& s) {
  for (EdgeTag t : {EdgeTag::Internal, EdgeTag::External, EdgeTag::Dangling})
    if (to_string(t) == s) return t;
  throw Error(ErrorCode::InvalidInput, "unknown edge tag \"" + s + "\"");
}

inline json to_json(const WeightedMultigraph& g) {
  json vertices = json::array(), edges = json::array();
  for (int v = 0; v < g.num_vertices(); ++v) vertices.push_back({{"id", v}, {"label", to_json(g.label(v))}});
  for (const Edge& e : g.edges())
    edges.push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}, {"tag", std::string(to_string(e.tag))}});
  return {{"vertices", vertices}, {"edges", edges}};
}

/// Vertex ids must be 0..|V|-1 in order; labels are optional.
inline WeightedMultigraph graph_from_json(const json& j) {
  WeightedMultigraph g;
  const json vertices = detail::field<json>(j, "vertices");
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const json& v = vertices[k];
    if (detail::field<int>(v, "id") != static_cast<int>(k)) throw Error(ErrorCode::InvalidInput, "vertex ids must be 0..|V|-1 in order");
    VertexLabel l;
    if (v.contains("label")) {
      const json& lj = v["label"];
      l.gate_index = lj.value("gate", -1);
      l.role = role_from_string(lj.value("role", std::string("internal")));
      l.qubit = lj.value("qubit", 0);
      l.slot = lj.value("slot", 0);
    }
    g.add_vertex(l);
  }
  for (const json& e : detail::field<json>(j, "edges"))
    g.add_edge(detail::field<int>(e, "u"), detail::field<int>(e, "v"), detail::field<double>(e, "w"),
               tag_from_string(e.value("tag", std::string("internal"))));
  return g;
}

inline std::string to_dot(const WeightedMultigraph& g) {
  std::ostringstream out;
  out << "graph G {\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    const VertexLabel& l = g.label(v);
    out << "  " << v << " [label=\"" << v << ' ' << to_string(l.role);
    if (l.qubit > 0) out << " q" << l.qubit;
    if (l.gate_index >= 0) out << " g" << l.gate_index;
    out << "\"];\n";
  }
  for (const Edge& e : g.edges()) {
    out << "  " << e.u << " -- " << e.v << " [label=\"" << e.w << "\"";
    if (e.tag == EdgeTag::External) out << ", style=dashed";
    if (e.tag == EdgeTag::Dangling) out << ", style=dotted";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

inline json to_json(const MatchingLadder& ladder) {
  json z = json::array(), log_z = json::array();
  for (double x : ladder.z) z.push_back(x);
  for (double x : ladder.log_z()) log_z.push_back(detail::number(x));
  return {{"z", z}, {"log_z", log_z}, {"total", ladder.total}};
}

// ---------------------------------------------------------------------------
// Reports. Wall-clock time is left out unless asked for so that identical
// seeds give byte-identical output.

inline json to_json(const SamplerStats& s) {
  return {{"steps", s.steps},
          {"holds", s.holds},
          {"blocked", s.blocked},
          {"proposed", {{"delete", s.proposed[0]}, {"add", s.proposed[1]}, {"shift", s.proposed[2]}}},
          {"accepted", {{"delete", s.accepted[0]}, {"add", s.accepted[1]}, {"shift", s.accepted[2]}}},
          {"acceptance_rate", s.acceptance_rate()}};
}

inline json to_json(const EstimateReport& r, bool with_timing = false) {
  json levels = json::array();
  for (const LevelRecord& l : r.levels)
    levels.push_back({{"k", l.k}, {"alpha", l.alpha}, {"p_k", l.p_k}, {"p_k1", l.p_k1}, {"steps", l.steps}});
  json out = {{"estimate", r.aborted ? json(nullptr) : json(r.estimate)},
              {"log_estimate", r.aborted ? json(nullptr) : detail::number(r.log_estimate)},
              {"relative_error_target", r.relative_error_target},
              {"mode", std::string(to_string(r.mode))},
              {"seed", r.seed},
              {"trial", r.trial},
              {"aborted", r.aborted},
              {"levels", levels},
              {"sampler", to_json(r.sampler)}};
  if (r.aborted) out["abort"] = {{"reason", std::string(to_string(r.abort_reason))}, {"level", r.abort_level}};
  if (with_timing) out["wall_seconds"] = r.wall_seconds;
  return out;
}

inline json to_json(const MedianResult& m, bool with_timing = false) {
  json runs = json::array();
  for (const EstimateReport& r : m.runs) runs.push_back(to_json(r, with_timing));
  return {{"estimate", m.majority_aborted ? json(nullptr) : json(m.estimate)},
          {"trials", m.trials},
          {"succeeded", m.succeeded},
          {"aborted", m.majority_aborted},
          {"runs", runs}};
}

inline json to_json(const PipelinePlan& p) {
  return {{"n", p.n},
          {"r", p.r},
          {"r_from_bound", p.r_from_bound},
          {"gates", p.gates},
          {"unelided_gates", p.unelided_gates},
          {"skipped", p.skipped},
          {"idle_qubits", p.idle_qubits},
          {"num_vertices", p.num_vertices},
          {"num_edges", p.num_edges},
          {"w_max", p.w_max},
          {"w_min", p.w_min},
          {"samples", p.samples},
          {"steps", p.steps},
          {"delta", p.delta},
          {"projected_steps", p.projected_steps}};
}

inline json to_json(const PartitionReport& r, bool with_timing = false) {
  json runs = json::array();
  for (const EstimateReport& run : r.runs) runs.push_back(to_json(run, with_timing));
  json out = {{"estimate", r.aborted ? json(nullptr) : json(r.estimate)},
              {"log_estimate", r.aborted ? json(nullptr) : detail::number(r.log_estimate)},
              {"relative_error_target", r.eps},
              {"beta", r.beta},
              {"mode", std::string(to_string(r.mode))},
              {"seed", r.seed},
              {"trials", r.trials},
              {"succeeded", r.succeeded},
              {"aborted", r.aborted},
              {"plan", to_json(r.plan)},
              {"error_budget",
               {{"trotter", r.budget.trotter_eps},
                {"estimator", r.budget.estimator_eps},
                {"composed", r.budget.composed},
                {"holds", r.budget.holds}}},
              {"runs", runs}};
  if (r.aborted) out["abort"] = r.abort_detail;
  if (r.cross_validation) {
    const CrossValidation& cv = *r.cross_validation;
    out["cross_validation"] = {{"exact_z", cv.exact_z},
                               {"sequence_trace", cv.sequence_trace},
                               {"perfmatch", cv.perfmatch ? json(*cv.perfmatch) : json(nullptr)},
                               {"trotter_gap", cv.trotter_gap},
                               {"trotter_within_budget", cv.trotter_within_budget},
                               {"compile_gap", cv.compile_gap},
                               {"compile_consistent", cv.compile_consistent}};
  }
  return out;
}

inline json to_json(const EnergyReport& e, const char* quantity, bool with_timing = false) {
  return {{quantity, e.partition.aborted ? json(nullptr) : json(e.value)},
          {"beta", e.beta},
          {"absolute_error_target", e.delta_abs},
          {"eps", e.eps},
          {"partition", to_json(e.partition, with_timing)}};
}

}  // namespace ferroqmc::io
