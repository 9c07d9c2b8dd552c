// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ferroqmc/ferroqmc.hpp"
#include "ferroqmc/io.hpp"
#include "test_support.hpp"

using namespace ferroqmc;
using namespace ferroqmc::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* what, double max_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > max_seconds) {
    out.ok = false;
    out.detail += "; over time limit";
  }
  if (!out.ok) ++failures;
  std::printf("%s criterion %d: %s | %s | %.1fs (limit %.0fs)\n", out.ok ? "PASS" : "FAIL", id, what,
              out.detail.c_str(), secs, max_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

DenseMatrix local_gate(GateKind k, double t) {
  if (k == GateKind::F) return mat2(t, 0, 0, 1);
  DenseMatrix m = DenseMatrix::identity(4);
  const std::size_t heavy = k == GateKind::G ? 0 : 1, partner = k == GateKind::G ? 3 : 2;
  m(heavy, heavy) = 1 + t * t;
  m(heavy, partner) = m(partner, heavy) = t;
  return m;
}

Gate random_gate(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double t = u(rng);
  while (t == 0.0) t = u(rng);
  if (n == 1 || rng() % 3 == 0) return {GateKind::F, 1 + static_cast<int>(rng() % n), 0, t};
  int a = 1 + static_cast<int>(rng() % n), b = 1 + static_cast<int>(rng() % (n - 1));
  if (b >= a) ++b;
  return {rng() % 2 ? GateKind::G : GateKind::H, std::min(a, b), std::max(a, b), t};
}

GateSequence random_circuit(std::mt19937_64& rng, int max_gates) {
  const int n = 1 + static_cast<int>(rng() % 3);
  const int j = 1 + static_cast<int>(rng() % max_gates);
  GateSequence seq{n, {}, j, 1, 0};
  for (int k = 0; k < j; ++k) seq.gates.push_back(random_gate(n, rng));
  return seq;
}

void for_each_small_graph(int max_edges, const std::function<void(const std::vector<std::pair<int, int>>&)>& fn) {
  std::vector<std::pair<int, int>> edges;
  auto rec = [&](auto&& self, int nv) -> void {
    fn(edges);
    if (static_cast<int>(edges.size()) == max_edges) return;
    for (int u = 0; u <= nv; ++u) {
      const int v_lo = u == nv ? nv + 1 : u + 1, v_hi = u == nv ? nv + 1 : nv;
      for (int v = v_lo; v <= v_hi; ++v) {
        edges.push_back({u, v});
        self(self, std::max(nv, v + 1));
        edges.pop_back();
      }
    }
  };
  rec(rec, 0);
}

WeightedMultigraph from_edges(int nv, const std::vector<std::tuple<int, int, double>>& edges) {
  WeightedMultigraph g;
  for (int v = 0; v < nv; ++v) g.add_vertex();
  for (auto [u, v, w] : edges) g.add_edge(u, v, w);
  return g;
}

Outcome gadget_fidelity() {
  const DenseMatrix raise = mat2(0, 0, 1, 0), lower = mat2(0, 1, 0, 0);
  double worst = 0.0;
  int variants = 0;
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (GateKind k : {GateKind::F, GateKind::G, GateKind::H}) {
      const Gate gate{k, 1, k == GateKind::F ? 0 : 2, t};
      const Gadget gd = gadget_for(gate);
      worst = std::max(worst, max_abs_diff(implemented_gate(gd), local_gate(k, t)));
      if (k == GateKind::F) continue;
      const std::vector<int> dist{gd.inputs[0], gd.inputs[1], gd.outputs[0], gd.outputs[1]};
      for (unsigned mask = 1; mask < 16; ++mask) {
        if (std::popcount(mask) > 2) continue;
        std::vector<DenseMatrix> right(2, pauli_i()), left(2, pauli_i());
        std::vector<int> at;
        for (int s = 0; s < 4; ++s)
          if (mask >> s & 1u) {
            at.push_back(dist[static_cast<std::size_t>(s)]);
            (s < 2 ? right[static_cast<std::size_t>(s)] : left[static_cast<std::size_t>(s - 2)]) = s < 2 ? raise : lower;
          }
        const DenseMatrix want = kron(left[0], left[1]) * local_gate(k, t) * kron(right[0], right[1]);
        const Gadget mod{add_dangling(gd.graph, std::span<const int>(at)), gd.inputs, gd.outputs};
        worst = std::max(worst, max_abs_diff(implemented_gate(mod), want));
        ++variants;
      }
    }
  const bool ok = worst <= 1e-12 && variants == 5 * 2 * 10;
  return {ok, fmt("max entry error %.2e (tol 1e-12)", worst) + ", " + std::to_string(variants) + " dangling variants"};
}

Outcome trace_identity() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const GateSequence seq = random_circuit(rng, 8);
    const double tr = sequence_trace_exact(seq);
    const double pm = std::ldexp(perfmatch_exact(compile_circuit(seq)), idle_qubit_count(seq));
    worst = std::max(worst, std::abs(pm - tr) / tr);
  }
  return {worst <= 1e-9, fmt("100 circuits, max relative gap %.2e (tol 1e-9)", worst)};
}

double trotter_log_error(const FerroHamiltonian& h, double beta, int r) {
  return std::abs(sequence_log_trace_exact(build_sequence_with_r(h, beta, r)) - exact_log_partition(h, beta));
}

Outcome trotter_accuracy() {
  std::mt19937_64 rng(31);
  double worst = 0.0;
  int max_r = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + rep % 2;
    const double beta = rep % 4 < 2 ? 0.5 : 1.0;
    const FerroHamiltonian h = random_hamiltonian(n, rng);
    const GateSequence seq = build_sequence(h, beta, 0.5);
    max_r = std::max(max_r, seq.r);
    worst = std::max(worst, std::abs(sequence_log_trace_exact(seq) - exact_log_partition(h, beta)));
  }
  const FerroHamiltonian h = validate({2, {{1, 2, 0.6, 0.2}}, {0.3, -0.2}});
  double lo = 1e9, hi = 0.0;
  double prev = trotter_log_error(h, 1.0, 4);
  for (int r = 8; r <= 32; r *= 2) {
    const double e = trotter_log_error(h, 1.0, r);
    const double slope = std::log2(prev / e);
    lo = std::min(lo, slope);
    hi = std::max(hi, slope);
    prev = e;
  }
  const bool ok = worst <= 0.125 && lo >= 0.85 && hi <= 1.15;
  return {ok, fmt("max |log Z_J - log Z| %.3e (tol 0.125)", worst) + ", largest r " + std::to_string(max_r) +
                  fmt(", 1/r slope in [%.3f,", lo) + fmt(" %.3f] (tol 1 +- 0.15)", hi)};
}

Outcome gate_error_and_remainder() {
  double worst_ratio = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double t = k / 21.0;
    worst_ratio = std::max(worst_ratio, verify_prop1(t).e_norm / (t * t));
  }
  std::mt19937_64 rng(37);
  double worst_magnus = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const FerroHamiltonian h = random_hamiltonian(2, rng);
    for (double beta : {0.5, 1.0}) {
      const GateSequence seq = build_sequence(h, beta, 0.5);
      const TrotterDiagnostics d = verify_magnus(seq, beta, h);
      worst_magnus = std::max(worst_magnus, d.magnus_delta_norm / d.magnus_bound);
    }
  }
  return {worst_ratio <= 1.0 && worst_magnus <= 1.0,
          fmt("max ||E(t)||/t^2 %.3f (tol 1)", worst_ratio) + fmt(", max ||Delta||/bound %.3e (tol 1)", worst_magnus)};
}

Outcome log_concavity() {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> up(0.2, 0.9);
  int violations = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const int nv = 2 + static_cast<int>(rng() % 11);
    const LogConcavityResult r = check_log_concavity(random_graph(nv, up(rng), 0.05, 3.0, rng));
    violations += !r.holds || !r.ratios_monotone;
  }
  return {violations == 0, std::to_string(violations) + " violations in 50 graphs (tol 0)"};
}

Outcome ratio_bound() {
  std::mt19937_64 rng(43);
  double worst_ratio = 0.0, worst_omega = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const GateSequence seq = random_circuit(rng, 8);
    const WeightedMultigraph g = compile_circuit(seq);
    const double j = static_cast<double>(seq.size());
    const double pm = perfmatch_exact(g), npm = nearperfmatch_exact(g);
    worst_ratio = std::max(worst_ratio, npm / pm / (10 * j * j));
    const auto table = omega_table(g);
    double sum = 0.0;
    for (int u = 0; u < g.num_vertices(); ++u)
      for (int v = u + 1; v < g.num_vertices(); ++v) sum += table[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
    worst_omega = std::max(worst_omega, std::abs(sum - npm) / npm);
  }
  return {worst_ratio <= 1.0 && worst_omega <= 1e-12,
          fmt("max NPM/(PM 10 J^2) %.3e (tol 1)", worst_ratio) + fmt(", max |sum Omega - NPM|/NPM %.2e (tol 1e-12)", worst_omega)};
}

std::map<Matching, long long> histogram(const std::vector<Matching>& ms) {
  std::map<Matching, long long> h;
  for (const Matching& m : ms) ++h[m];
  return h;
}

Outcome sampler_correctness() {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> uw(0.05, 3.0);
  double worst_balance = 0.0;
  int graphs = 0;
  for_each_small_graph(4, [&](const std::vector<std::pair<int, int>>& edges) {
    int nv = 0;
    for (auto [u, v] : edges) nv = std::max(nv, v + 1);
    WeightedMultigraph g;
    for (int v = 0; v < nv; ++v) g.add_vertex();
    for (auto [u, v] : edges) g.add_edge(u, v, uw(rng));
    const TransitionMatrix tm = transition_matrix(g);
    const std::size_t ns = tm.states.size();
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t j = 0; j < ns; ++j) {
        const double a = tm.states[i].weight(g) * tm.p(i, j), b = tm.states[j].weight(g) * tm.p(j, i);
        worst_balance = std::max(worst_balance, std::abs(a - b) / std::max(1e-300, a + b));
      }
    ++graphs;
  });

  std::vector<WeightedMultigraph> fixed;
  fixed.push_back(path_graph(4));
  fixed.push_back(cycle_graph(6, 0.8));
  fixed.push_back(from_edges(4, {{0, 1, 0.5}, {0, 2, 1.5}, {0, 3, 2.0}, {1, 2, 0.7}, {1, 3, 1.1}, {2, 3, 0.3}}));
  fixed.push_back(random_graph(8, 0.4, 0.3, 2.0, rng));
  fixed.push_back(compile_circuit({2, {{GateKind::G, 1, 2, 0.6}, {GateKind::F, 1, 0, 0.4}, {GateKind::F, 2, 0, 0.8}}, 3, 1, 0}));
  double worst_tv = 0.0;
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    const WeightedMultigraph& g = fixed[i];
    const SamplerConfig cfg{default_steps(g, 0.1, SamplerMode::Practical), SamplerMode::Practical, 500 + i};
    worst_tv = std::max(worst_tv, total_variation(stationary_exact(g), histogram(sample_matchings(g, cfg, 100000, 0))));
  }
  return {worst_balance <= 1e-12 && worst_tv <= 0.05,
          std::to_string(graphs) + fmt(" small graphs, max balance gap %.2e (tol 1e-12)", worst_balance) +
              fmt(", max TV over 5 graphs %.4f (tol 0.05)", worst_tv)};
}

Outcome estimator_accuracy() {
  std::mt19937_64 rng(53);
  std::vector<WeightedMultigraph> graphs;
  graphs.push_back(cycle_graph(4));
  graphs.push_back(path_graph(6, 1.7));
  graphs.push_back(cycle_graph(8, 0.7));
  graphs.push_back(from_edges(4, {{0, 1, 0.5}, {0, 2, 1.5}, {0, 3, 2.0}, {1, 2, 0.7}, {1, 3, 1.1}, {2, 3, 0.3}}));
  // 2 x 3 grid
  graphs.push_back(from_edges(6, {{0, 1, 1}, {1, 2, 1}, {3, 4, 1}, {4, 5, 1}, {0, 3, 1}, {1, 4, 1}, {2, 5, 1}}));
  // K_{3,3} with mixed weights
  graphs.push_back(from_edges(6, {{0, 3, 0.4}, {0, 4, 1.2}, {0, 5, 0.8}, {1, 3, 2.0}, {1, 4, 0.6},
                                  {1, 5, 1.0}, {2, 3, 0.9}, {2, 4, 1.5}, {2, 5, 0.5}}));
  while (graphs.size() < 9) {
    const int nv = graphs.size() == 6 ? 8 : graphs.size() == 7 ? 10 : 12;
    WeightedMultigraph g = random_graph(nv, 0.35, 0.5, 2.0, rng);
    if (perfmatch_exact(g) > 0.0) graphs.push_back(std::move(g));
  }
  graphs.push_back(compile_circuit({2, {{GateKind::G, 1, 2, 0.5}, {GateKind::H, 1, 2, 0.5}, {GateKind::F, 1, 0, 0.5}}, 3, 1, 0}));

  int worst_hits = 20;
  std::string per;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const WeightedMultigraph& g = graphs[i];
    const double pm = perfmatch_exact(g);
    int hits = 0;
    for (int trial = 0; trial < 20; ++trial) {
      EstimatorConfig ec;
      ec.samples_per_level = 6000;
      ec.steps = 1500;
      ec.seed = 9000 + 100 * i;
      const EstimateReport r = algorithm_b(g, ec, trial);
      hits += !r.aborted && std::abs(r.estimate / pm - 1.0) <= 0.2;
    }
    worst_hits = std::min(worst_hits, hits);
    per += (i ? " " : "") + std::to_string(hits);
  }
  return {worst_hits >= 15, "hits within 0.2 per graph [" + per + "] (need >= 15/20 each)"};
}

Outcome end_to_end() {
  struct Case {
    const char* name;
    FerroHamiltonian h;
    double beta;
    PipelineConfig cfg;
  };
  PipelineConfig field_cfg;
  field_cfg.r = 2;
  field_cfg.samples = 3000;
  field_cfg.steps = 300;
  PipelineConfig xy_cfg;
  xy_cfg.r = 2;
  xy_cfg.samples = 10000;
  xy_cfg.steps = 3000;
  std::vector<Case> cases{{"n=1 d=1 beta=1", validate({1, {}, {1.0}}), 1.0, field_cfg},
                          {"n=2 XY beta=0.5", validate({2, {{1, 2, 1.0, -1.0}}, {0.0, 0.0}}), 0.5, xy_cfg}};
  bool ok = true;
  std::string detail;
  for (Case& c : cases) {
    const double z = exact_partition(c.h, c.beta);
    c.cfg.beta = c.beta;
    int hits = 0;
    for (int trial = 0; trial < 20; ++trial) {
      c.cfg.seed = 70000 + static_cast<std::uint64_t>(trial);
      const PartitionReport r = estimate_partition(c.h, c.cfg);
      hits += !r.aborted && std::abs(r.estimate / z - 1.0) <= 0.15;
    }
    ok = ok && hits >= 15;
    detail += std::string(detail.empty() ? "" : ", ") + c.name + ": " + std::to_string(hits) + "/20";
  }
  return {ok, detail + " within 15% (need >= 15/20)"};
}

Outcome determinism() {
  const FerroHamiltonian h = validate({2, {{1, 2, 1.0, -1.0}}, {0.2, 0.0}});
  PipelineConfig cfg;
  cfg.beta = 0.5;
  cfg.r = 2;
  cfg.samples = 500;
  cfg.steps = 300;
  cfg.trials = 3;
  cfg.seed = 77;
  cfg.cross_validate = true;
  std::vector<std::string> dumps;
  for (unsigned threads : {1u, 1u, 2u, 4u}) {
    cfg.threads = threads;
    dumps.push_back(io::to_json(estimate_partition(h, cfg)).dump());
  }
  const WeightedMultigraph g = cycle_graph(6, 0.8);
  const SamplerConfig sc{200, SamplerMode::Practical, 5};
  const bool samples_equal = sample_matchings(g, sc, 2000, 1) == sample_matchings(g, sc, 2000, 4);
  const bool reports_equal = std::all_of(dumps.begin(), dumps.end(), [&](const std::string& d) { return d == dumps[0]; });
  return {reports_equal && samples_equal, std::string("reports ") + (reports_equal ? "identical" : "differ") +
                                              " across 4 runs (threads 1,1,2,4), samples " +
                                              (samples_equal ? "identical" : "differ")};
}

}  // namespace

int main() {
  criterion(1, "gadget fidelity", 1, gadget_fidelity);
  criterion(2, "trace identity", 30, trace_identity);
  criterion(3, "Trotter accuracy", 300, trotter_accuracy);
  criterion(4, "gate error and Magnus remainder", 10, gate_error_and_remainder);
  criterion(5, "log-concavity and monotone ratios", 30, log_concavity);
  criterion(6, "near-perfect to perfect ratio", 120, ratio_bound);
  criterion(7, "sampler correctness", 300, sampler_correctness);
  criterion(8, "estimator accuracy", 900, estimator_accuracy);
  criterion(9, "end-to-end partition function", 1800, end_to_end);
  criterion(10, "determinism", 600, determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
