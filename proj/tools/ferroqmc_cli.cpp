// ferroqmc: command-line front end. Every subcommand reads and writes JSON.
//
// Exit status: 0 success, 2 the estimator gave up (abort, majority abort or a
// theory-mode plan over budget), 1 invalid input.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ferroqmc/ferroqmc.hpp"
#include "ferroqmc/io.hpp"

using namespace ferroqmc;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitAborted = 2;

struct Options {
  std::string hamiltonian;
  std::string graph;
  std::string sequence;
  std::string out;
  std::string format = "json";
  std::string mode = "practical";
  double beta = 1.0;
  double eps = 0.5;
  double delta_abs = 0.1;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  int trials = 1;
  int r = 0;
  long long samples = 0;
  long long steps = 0;
  unsigned threads = 0;
  double work_budget = 1e11;
  bool cross_validate = false;
  bool timing = false;
};

SamplerMode parse_mode(const std::string& s) {
  return s == "theory" ? SamplerMode::Theory : SamplerMode::Practical;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) std::cout << text;
  else io::write_text_file(o.out, text);
}

void emit(const Options& o, const json& j) { emit(o, j.dump(2) + "\n"); }

PipelineConfig pipeline_config(const Options& o) {
  PipelineConfig cfg;
  cfg.beta = o.beta;
  cfg.eps = o.eps;
  cfg.mode = parse_mode(o.mode);
  cfg.r = o.r;
  cfg.samples = o.samples;
  cfg.steps = o.steps;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.threads = o.threads;
  cfg.cross_validate = o.cross_validate;
  cfg.work_budget = o.work_budget;
  return cfg;
}

GateSequence load_or_build_sequence(const Options& o) {
  if (!o.sequence.empty()) return io::sequence_from_json(io::read_json_file(o.sequence));
  if (o.hamiltonian.empty()) throw Error(ErrorCode::InvalidInput, "need --hamiltonian or --sequence");
  const FerroHamiltonian h = io::load_hamiltonian(o.hamiltonian);
  return o.r > 0 ? build_sequence_with_r(h, o.beta, o.r) : build_sequence(h, o.beta, o.eps);
}

WeightedMultigraph load_graph(const Options& o) {
  if (!o.graph.empty()) return io::graph_from_json(io::read_json_file(o.graph));
  return compile_circuit(load_or_build_sequence(o));
}

int cmd_validate(const Options& o) {
  const FerroHamiltonian h = io::load_hamiltonian(o.hamiltonian);
  const SplitCoefficients split(h);
  json pq = json::array();
  for (const PairCoupling& p : h.pairs()) pq.push_back({{"i", p.i}, {"j", p.j}, {"p", split.p(p.i, p.j)}, {"q", split.q(p.i, p.j)}});
  emit(o, json{{"valid", true}, {"hamiltonian", io::to_json(h)}, {"split", pq}, {"norm_bound", h.norm_bound()}});
  return kExitOk;
}

int cmd_trotterize(const Options& o) {
  const FerroHamiltonian h = io::load_hamiltonian(o.hamiltonian);
  const GateSequence seq = o.r > 0 ? build_sequence_with_r(h, o.beta, o.r) : build_sequence(h, o.beta, o.eps);
  emit(o, io::to_json(seq));
  return kExitOk;
}

int cmd_compile(const Options& o) {
  const GateSequence seq = load_or_build_sequence(o);
  const WeightedMultigraph g = compile_circuit(seq);
  if (o.format == "dot") {
    emit(o, io::to_dot(g));
    return kExitOk;
  }
  json j = io::to_json(g);
  j["idle_qubits"] = idle_qubit_count(seq);
  emit(o, j);
  return kExitOk;
}

int cmd_exact(const Options& o) {
  json out;
  if (!o.hamiltonian.empty()) {
    const FerroHamiltonian h = io::load_hamiltonian(o.hamiltonian);
    out["spectrum"] = spectrum(h);
    out["ground_energy"] = exact_ground_energy(h);
    out["beta"] = o.beta;
    out["log_partition"] = exact_log_partition(h, o.beta);
    out["partition"] = exact_partition(h, o.beta);
    out["free_energy"] = exact_free_energy(h, o.beta);
    if (o.r > 0 || !o.sequence.empty()) {
      const GateSequence seq = load_or_build_sequence(o);
      out["sequence_log_trace"] = sequence_log_trace_exact(seq);
      out["r"] = seq.r;
    }
  } else if (!o.sequence.empty()) {
    const GateSequence seq = io::sequence_from_json(io::read_json_file(o.sequence));
    out["sequence_log_trace"] = sequence_log_trace_exact(seq);
    out["r"] = seq.r;
    if (!seq.empty()) {
      const WeightedMultigraph g = compile_circuit(seq);
      if (g.num_vertices() <= kMaxExactVertices)
        out["perfmatch_times_idle"] = std::ldexp(perfmatch_exact(g), idle_qubit_count(seq));
    }
  }
  if (!o.graph.empty()) {
    const WeightedMultigraph g = io::graph_from_json(io::read_json_file(o.graph));
    const MatchingLadder ladder = matching_ladder(g);
    out["ladder"] = io::to_json(ladder);
    if (g.num_vertices() % 2 == 0) {
      out["perfmatch"] = ladder.z.back();
      out["nearperfmatch"] = g.num_vertices() > 0 ? ladder.z[ladder.z.size() - 2] : 0.0;
    }
    const LogConcavityResult lc = check_log_concavity(ladder);
    out["log_concave"] = lc.holds;
    out["ratios_monotone"] = lc.ratios_monotone;
  }
  if (out.is_null()) throw Error(ErrorCode::InvalidInput, "need --hamiltonian, --sequence or --graph");
  emit(o, out);
  return kExitOk;
}

int cmd_sample(const Options& o) {
  const WeightedMultigraph g = load_graph(o);
  SamplerConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.seed = o.seed;
  cfg.steps = o.steps > 0 ? o.steps : default_steps(g, 0.1, cfg.mode, o.alpha);
  const long long count = o.samples > 0 ? o.samples : 1000;
  const auto draws = sample_matchings(g, cfg, static_cast<std::size_t>(count),
                                      o.threads == 0 ? default_thread_count() : o.threads, o.alpha);
  std::map<int, long long> by_size;
  std::map<Matching, long long> by_state;
  for (const Matching& m : draws) {
    ++by_size[m.size()];
    ++by_state[m];
  }
  json sizes = json::object();
  for (const auto& [k, c] : by_size) sizes[std::to_string(k)] = c;
  json out = {{"samples", count}, {"steps", cfg.steps}, {"alpha", o.alpha}, {"seed", o.seed}, {"size_counts", sizes}};
  if (by_state.size() <= 64) {
    json states = json::array();
    for (const auto& [m, c] : by_state)
      states.push_back({{"edges", std::vector<int>(m.edges().begin(), m.edges().end())}, {"count", c}});
    out["states"] = states;
  }
  emit(o, out);
  return kExitOk;
}

int cmd_estimate_pm(const Options& o) {
  const WeightedMultigraph g = load_graph(o);
  EstimatorConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.threads = o.threads;
  cfg.steps = o.steps;
  cfg.relative_error_target = o.eps;
  if (cfg.mode == SamplerMode::Theory) {
    const TheoryParams tp = theory_params(g, o.eps, cfg.q_coeff);
    cfg.samples_per_level = o.samples > 0 ? o.samples : tp.samples_per_level;
    cfg.delta = tp.delta;
    const long long steps = o.steps > 0 ? o.steps : default_steps(g, cfg.delta, cfg.mode);
    const double work = std::max(0, g.num_vertices() / 2 - 1) * static_cast<double>(cfg.samples_per_level) *
                        static_cast<double>(steps) * cfg.trials;
    std::cerr << "theory plan: |V|=" << g.num_vertices() << " |E|=" << g.num_edges()
              << " T=" << cfg.samples_per_level << " delta=" << cfg.delta << " steps=" << steps
              << " projected chain steps=" << work << "\n";
    if (work > o.work_budget)
      throw Error(ErrorCode::BudgetExceeded, "theory-mode plan exceeds the work budget; use --mode practical");
  } else {
    cfg.samples_per_level = o.samples > 0 ? o.samples : kDefaultPracticalSamples;
  }
  const MedianResult m = estimate_perfmatch(g, cfg);
  emit(o, io::to_json(m, o.timing));
  return m.majority_aborted ? kExitAborted : kExitOk;
}

void print_plan(const PipelinePlan& p) {
  std::cerr << "plan: r=" << p.r << " J=" << p.gates << " (unelided " << p.unelided_gates << ") |V|=" << p.num_vertices
            << " |E|=" << p.num_edges << " T=" << p.samples << " steps=" << p.steps << " delta=" << p.delta
            << " projected chain steps=" << p.projected_steps << "\n";
}

void print_budget_refusal(const FerroHamiltonian& h, const PipelineConfig& cfg) {
  const GateSequence seq = detail::pipeline_sequence(h, cfg);
  if (seq.empty()) return;
  const WeightedMultigraph g = compile_circuit(seq);
  print_plan(plan_partition(h, cfg, seq, &g));
}

int cmd_estimate_z(const Options& o) {
  const FerroHamiltonian h = io::load_hamiltonian(o.hamiltonian);
  const PipelineConfig cfg = pipeline_config(o);
  try {
    const PartitionReport rep = estimate_partition(h, cfg);
    if (cfg.mode == SamplerMode::Theory) print_plan(rep.plan);
    emit(o, io::to_json(rep, o.timing));
    return rep.aborted ? kExitAborted : kExitOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BudgetExceeded) print_budget_refusal(h, cfg);
    throw;
  }
}

int cmd_free_energy(const Options& o) {
  const FerroHamiltonian h = io::load_hamiltonian(o.hamiltonian);
  const EnergyReport e = estimate_free_energy(h, o.beta, o.delta_abs, pipeline_config(o));
  emit(o, io::to_json(e, "free_energy", o.timing));
  return e.partition.aborted ? kExitAborted : kExitOk;
}

int cmd_ground_energy(const Options& o) {
  const FerroHamiltonian h = io::load_hamiltonian(o.hamiltonian);
  const EnergyReport e = estimate_ground_energy(h, o.delta_abs, pipeline_config(o));
  emit(o, io::to_json(e, "ground_energy", o.timing));
  return e.partition.aborted ? kExitAborted : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition functions of ferromagnetic XY-type spin Hamiltonians by matching-sum Monte Carlo"};
  app.require_subcommand(1);
  Options o;

  auto add_ham = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--hamiltonian", o.hamiltonian, "Hamiltonian JSON file")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto add_trotter = [&](CLI::App* c) {
    c->add_option("--beta", o.beta, "inverse temperature")->check(CLI::PositiveNumber);
    c->add_option("--eps", o.eps, "relative error target in (0,1)")->check(CLI::Range(0.0, 1.0));
    c->add_option("--r", o.r, "Trotter period count (0 = from the error bound)")->check(CLI::NonNegativeNumber);
  };
  auto add_sampling = [&](CLI::App* c) {
    c->add_option("--mode", o.mode, "theory or practical")->check(CLI::IsMember({"theory", "practical"}));
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--trials", o.trials, "independent runs for the median (odd)")->check(CLI::PositiveNumber);
    c->add_option("--samples", o.samples, "samples per level (0 = default)")->check(CLI::NonNegativeNumber);
    c->add_option("--steps", o.steps, "chain steps per sample (0 = default)")->check(CLI::NonNegativeNumber);
    c->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    c->add_option("--work-budget", o.work_budget, "theory mode refuses plans above this many chain steps");
    c->add_flag("--timing", o.timing, "include wall-clock times in the report");
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output file (default stdout)"); };

  auto* validate_cmd = app.add_subcommand("validate", "check a Hamiltonian file");
  add_ham(validate_cmd, true);
  add_out(validate_cmd);

  auto* trotter_cmd = app.add_subcommand("trotterize", "emit the gate sequence");
  add_ham(trotter_cmd, true);
  add_trotter(trotter_cmd);
  add_out(trotter_cmd);

  auto* compile_cmd = app.add_subcommand("compile-graph", "compile a gate sequence to a matching graph");
  add_ham(compile_cmd, false);
  compile_cmd->add_option("--sequence", o.sequence, "gate sequence JSON")->check(CLI::ExistingFile);
  compile_cmd->add_option("--format", o.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
  add_trotter(compile_cmd);
  add_out(compile_cmd);

  auto* exact_cmd = app.add_subcommand("exact", "exact oracles for a Hamiltonian or a graph");
  add_ham(exact_cmd, false);
  exact_cmd->add_option("--graph", o.graph, "graph JSON")->check(CLI::ExistingFile);
  exact_cmd->add_option("--sequence", o.sequence, "gate sequence JSON")->check(CLI::ExistingFile);
  add_trotter(exact_cmd);
  add_out(exact_cmd);

  auto* sample_cmd = app.add_subcommand("sample", "draw matchings from the chain");
  add_ham(sample_cmd, false);
  sample_cmd->add_option("--graph", o.graph, "graph JSON")->check(CLI::ExistingFile);
  sample_cmd->add_option("--alpha", o.alpha, "edge weight multiplier")->check(CLI::PositiveNumber);
  add_trotter(sample_cmd);
  add_sampling(sample_cmd);
  add_out(sample_cmd);

  auto* pm_cmd = app.add_subcommand("estimate-pm", "estimate the perfect-matching sum of a graph");
  add_ham(pm_cmd, false);
  pm_cmd->add_option("--graph", o.graph, "graph JSON")->check(CLI::ExistingFile);
  add_trotter(pm_cmd);
  add_sampling(pm_cmd);
  add_out(pm_cmd);

  auto* z_cmd = app.add_subcommand("estimate-z", "estimate Tr exp(-beta H)");
  add_ham(z_cmd, true);
  add_trotter(z_cmd);
  add_sampling(z_cmd);
  z_cmd->add_flag("--cross-validate", o.cross_validate, "also compute the exact values (n <= 3)");
  add_out(z_cmd);

  auto* f_cmd = app.add_subcommand("free-energy", "estimate F(beta) to an absolute error");
  add_ham(f_cmd, true);
  add_trotter(f_cmd);
  add_sampling(f_cmd);
  f_cmd->add_option("--delta", o.delta_abs, "absolute error target")->check(CLI::PositiveNumber);
  add_out(f_cmd);

  auto* e_cmd = app.add_subcommand("ground-energy", "estimate the ground energy to an absolute error");
  add_ham(e_cmd, true);
  add_sampling(e_cmd);
  e_cmd->add_option("--r", o.r, "Trotter period count (0 = from the error bound)")->check(CLI::NonNegativeNumber);
  e_cmd->add_option("--delta", o.delta_abs, "absolute error target")->check(CLI::PositiveNumber);
  add_out(e_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*validate_cmd) return cmd_validate(o);
    if (*trotter_cmd) return cmd_trotterize(o);
    if (*compile_cmd) return cmd_compile(o);
    if (*exact_cmd) return cmd_exact(o);
    if (*sample_cmd) return cmd_sample(o);
    if (*pm_cmd) return cmd_estimate_pm(o);
    if (*z_cmd) return cmd_estimate_z(o);
    if (*f_cmd) return cmd_free_energy(o);
    if (*e_cmd) return cmd_ground_energy(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool gave_up = e.code() == ErrorCode::MajorityAborted || e.code() == ErrorCode::BudgetExceeded;
    return gave_up ? kExitAborted : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
