#include "ferroqmc/io.hpp"

#include <gtest/gtest.h>

#include "ferroqmc/matchgraph.hpp"

using namespace ferroqmc;
using io::json;

TEST(HamiltonianJson, RoundTrip) {
  const json j = json::parse(R"({"n": 3, "pairs": [{"i": 1, "j": 3, "b": 0.5, "c": -0.25}], "d": [0.1, 0.0, -0.2]})");
  const FerroHamiltonian h = io::hamiltonian_from_json(j);
  EXPECT_EQ(h.n(), 3);
  EXPECT_EQ(h.b(1, 3), 0.5);
  EXPECT_EQ(h.c(1, 3), -0.25);
  EXPECT_EQ(h.b(1, 2), 0.0);
  EXPECT_EQ(h.d(3), -0.2);
  const FerroHamiltonian back = io::hamiltonian_from_json(io::to_json(h));
  EXPECT_EQ(io::to_json(back), io::to_json(h));
}

TEST(HamiltonianJson, Rejections) {
  EXPECT_THROW(io::hamiltonian_from_json(json::parse(R"({"pairs": []})")), Error);
  EXPECT_THROW(io::hamiltonian_from_json(json::parse(R"({"n": "two"})")), Error);
  try {
    io::hamiltonian_from_json(json::parse(R"({"n": 2, "pairs": [{"i": 1, "j": 2, "b": 0.3, "c": 0.5}], "d": [0, 0]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFerromagnetic);
  }
  const FerroHamiltonian h = io::hamiltonian_from_json(json::parse(R"({"n": 2})"));
  EXPECT_EQ(h.d(1), 0.0);
}

TEST(SequenceJson, RoundTrip) {
  const FerroHamiltonian h = validate({2, {{1, 2, 0.8, 0.2}}, {0.5, 0.0}});
  const GateSequence seq = build_sequence_with_r(h, 1.0, 5);
  const json j = io::to_json(seq);
  EXPECT_EQ(j["gates"][0]["kind"], "f");
  EXPECT_EQ(j["gates"][1]["qubits"], json::array({1, 2}));
  const GateSequence back = io::sequence_from_json(j);
  EXPECT_EQ(back.gates, seq.gates);
  EXPECT_EQ(back.r, 5);
  EXPECT_EQ(back.period_len, seq.period_len);
  EXPECT_EQ(back.skipped, seq.skipped);
  json bad = j;
  bad["gates"][1]["t"] = 1.5;
  EXPECT_THROW(io::sequence_from_json(bad), Error);
  bad = j;
  bad["gates"][1]["qubits"] = json::array({1, 7});
  EXPECT_THROW(io::sequence_from_json(bad), Error);
}

TEST(GraphJson, RoundTripAndDot) {
  const GateSequence seq{2, {{GateKind::H, 1, 2, 0.3}, {GateKind::F, 1, 0, 0.6}}, 2, 1, 0};
  const WeightedMultigraph g = compile_circuit(seq);
  const json j = io::to_json(g);
  EXPECT_EQ(j["vertices"].size(), 8u);
  EXPECT_EQ(j["edges"][0]["tag"], "internal");
  EXPECT_EQ(io::graph_from_json(j), g);
  const std::string dot = io::to_dot(g);
  EXPECT_NE(dot.find("graph G {"), std::string::npos);
  EXPECT_NE(dot.find("style=dashed"), std::string::npos);
  EXPECT_NE(dot.find("0.3"), std::string::npos);
  json bad = j;
  bad["edges"][0]["w"] = -1.0;
  EXPECT_THROW(io::graph_from_json(bad), Error);
}

TEST(LadderJson, InfiniteLogsBecomeNull) {
  MatchingLadder l;
  l.z = {1.0, 2.0, 0.0};
  l.total = 3.0;
  const json j = io::to_json(l);
  EXPECT_TRUE(j["log_z"][2].is_null());
  EXPECT_EQ(j["z"][1], 2.0);
}

TEST(ReportJson, Fields) {
  EstimateReport r;
  r.estimate = 2.5;
  r.log_estimate = std::log(2.5);
  r.relative_error_target = 0.1;
  r.seed = 12;
  r.levels.push_back({1, 0.25, 0.5, 0.25, 100});
  r.wall_seconds = 1.25;
  const json j = io::to_json(r);
  EXPECT_EQ(j["estimate"], 2.5);
  EXPECT_EQ(j["mode"], "practical");
  EXPECT_EQ(j["levels"][0]["p_k1"], 0.25);
  EXPECT_EQ(j["aborted"], false);
  EXPECT_FALSE(j.contains("wall_seconds"));
  EXPECT_EQ(io::to_json(r, true)["wall_seconds"], 1.25);
  r.aborted = true;
  r.abort_reason = AbortReason::EmptyLevelK1;
  r.abort_level = 3;
  const json a = io::to_json(r);
  EXPECT_TRUE(a["estimate"].is_null());
  EXPECT_EQ(a["abort"]["level"], 3);
}
