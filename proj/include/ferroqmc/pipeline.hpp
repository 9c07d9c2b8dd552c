#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ferroqmc/error.hpp"
#include "ferroqmc/estimator.hpp"
#include "ferroqmc/exact.hpp"
#include "ferroqmc/hamiltonian.hpp"
#include "ferroqmc/matchgraph.hpp"
#include "ferroqmc/rng.hpp"
#include "ferroqmc/trotter.hpp"

namespace ferroqmc {

/// Everything the partition-function pipeline needs to make each downstream
/// choice. Zero-valued overrides mean "derive it".
struct PipelineConfig {
  double beta = 1.0;
  double eps = 0.5;
  SamplerMode mode = SamplerMode::Practical;
  int r = 0;                  // Trotter count; 0 = choose_r(n, beta, eps)
  long long samples = 0;      // T per level; 0 = 1000 (practical) or theory_params
  long long steps = 0;        // chain steps per sample; 0 = default_steps
  double delta = 0.1;         // practical-mode sampler precision
  double q_coeff = 1.0;
  StepBudget step_budget{};
  std::uint64_t seed = 0;
  int trials = 1;
  unsigned threads = 0;
  bool cross_validate = false;
  double work_budget = 1e11;  // theory mode refuses plans with more chain steps
};

inline constexpr long long kDefaultPracticalSamples = 1000;

/// Split of the relative-error target: Trotter eps/4, estimator eps/2.
struct ErrorBudget {
  double trotter_eps = 0.0;
  double estimator_eps = 0.0;
  double composed = 0.0;  // e^{eps/4} (1 + eps/2)
  bool holds = false;     // composed <= 1 + eps
};

inline ErrorBudget error_budget(double eps) {
  ErrorBudget b;
  b.trotter_eps = eps / 4.0;
  b.estimator_eps = eps / 2.0;
  b.composed = std::exp(b.trotter_eps) * (1.0 + b.estimator_eps);
  b.holds = b.composed <= 1.0 + eps;
  return b;
}

struct PipelinePlan {
  int n = 0;
  int r = 0;
  bool r_from_bound = true;
  long long gates = 0;          // J actually stored
  long long unelided_gates = 0;  // 2 n^2 r
  int skipped = 0;
  int idle_qubits = 0;
  int num_vertices = 0;
  int num_edges = 0;
  double w_max = 1.0;
  double w_min = 1.0;
  long long samples = 0;
  long long steps = 0;  // at alpha = 1; levels may differ when derived
  double delta = 0.0;
  double projected_steps = 0.0;  // levels x T x steps x trials
};

struct CrossValidation {
  double exact_z = 0.0;
  double sequence_trace = 0.0;
  std::optional<double> perfmatch;  // exact PerfMatch x 2^idle, when small enough
  double trotter_gap = 0.0;         // |log Z_J - log Z|
  double compile_gap = 0.0;         // |PerfMatch 2^idle - Z_J| / Z_J
  bool compile_consistent = true;   // compile_gap <= 1e-9
  bool trotter_within_budget = true;  // trotter_gap <= eps / 4
};

struct PartitionReport {
  double estimate = 0.0;
  double log_estimate = 0.0;
  bool aborted = false;
  std::string abort_detail;
  double beta = 0.0;
  double eps = 0.0;
  SamplerMode mode = SamplerMode::Practical;
  std::uint64_t seed = 0;
  int trials = 0;
  int succeeded = 0;
  PipelinePlan plan;
  ErrorBudget budget;
  std::vector<EstimateReport> runs;
  std::optional<CrossValidation> cross_validation;
};

namespace detail {

inline void check_pipeline(const PipelineConfig& cfg) {
  if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) throw Error(ErrorCode::InvalidInput, "beta must be positive");
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw Error(ErrorCode::InvalidInput, "eps must lie in (0,1)");
  if (cfg.r < 0 || cfg.samples < 0 || cfg.steps < 0) throw Error(ErrorCode::InvalidInput, "overrides must be nonnegative");
  if (cfg.trials < 1 || cfg.trials % 2 == 0) throw Error(ErrorCode::InvalidInput, "trials must be odd and positive");
}

inline GateSequence pipeline_sequence(const FerroHamiltonian& h, const PipelineConfig& cfg) {
  return cfg.r > 0 ? build_sequence_with_r(h, cfg.beta, cfg.r) : build_sequence(h, cfg.beta, cfg.eps);
}

}  // namespace detail

/// Sizes the whole computation without sampling. The Trotter count comes from
/// choose_r(n, beta, eps), whose inequality already targets eps/4.
inline PipelinePlan plan_partition(const FerroHamiltonian& h, const PipelineConfig& cfg, const GateSequence& seq,
                                   const WeightedMultigraph* g) {
  PipelinePlan p;
  p.n = h.n();
  p.r = seq.r;
  p.r_from_bound = cfg.r == 0;
  p.gates = static_cast<long long>(seq.size());
  p.unelided_gates = seq.unelided_length();
  p.skipped = seq.skipped;
  p.idle_qubits = idle_qubit_count(seq);
  if (!g) return p;
  const GraphStats st = graph_stats(*g);
  p.num_vertices = st.num_vertices;
  p.num_edges = st.num_edges;
  p.w_max = st.w_max;
  p.w_min = st.w_min;
  if (cfg.mode == SamplerMode::Theory) {
    const TheoryParams tp = theory_params(*g, error_budget(cfg.eps).estimator_eps, cfg.q_coeff);
    p.samples = cfg.samples > 0 ? cfg.samples : tp.samples_per_level;
    p.delta = tp.delta;
  } else {
    p.samples = cfg.samples > 0 ? cfg.samples : kDefaultPracticalSamples;
    p.delta = cfg.delta;
  }
  p.steps = cfg.steps > 0 ? cfg.steps : default_steps(*g, p.delta, cfg.mode, 1.0, cfg.step_budget);
  p.projected_steps = std::max(0, g->num_vertices() / 2 - 1) * static_cast<double>(p.samples) *
                      static_cast<double>(p.steps) * cfg.trials;
  return p;
}

inline PartitionReport estimate_partition(const FerroHamiltonian& h, const PipelineConfig& cfg) {
  detail::check_pipeline(cfg);
  PartitionReport rep;
  rep.beta = cfg.beta;
  rep.eps = cfg.eps;
  rep.mode = cfg.mode;
  rep.seed = cfg.seed;
  rep.trials = cfg.trials;
  rep.budget = error_budget(cfg.eps);
  if (!rep.budget.holds) throw Error(ErrorCode::InvalidInput, "error budget does not compose for this eps");

  const GateSequence seq = detail::pipeline_sequence(h, cfg);
  std::optional<WeightedMultigraph> graph;
  if (!seq.empty()) graph = compile_circuit(seq);
  rep.plan = plan_partition(h, cfg, seq, graph ? &*graph : nullptr);

  if (cfg.cross_validate) {
    CrossValidation cv;
    const double log_z = exact_log_partition(h, cfg.beta);
    const double log_zj = sequence_log_trace_exact(seq);
    cv.exact_z = std::exp(log_z);
    cv.sequence_trace = std::exp(log_zj);
    cv.trotter_gap = std::abs(log_zj - log_z);
    cv.trotter_within_budget = cv.trotter_gap <= rep.budget.trotter_eps;
    if (!graph) {
      cv.perfmatch = std::ldexp(1.0, h.n());
    } else if (graph->num_vertices() <= kMaxExactVertices) {
      try {
        cv.perfmatch = std::ldexp(perfmatch_exact(*graph), rep.plan.idle_qubits);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::TooLarge) throw;
      }
    }
    if (cv.perfmatch) {
      cv.compile_gap = std::abs(*cv.perfmatch - cv.sequence_trace) / cv.sequence_trace;
      cv.compile_consistent = cv.compile_gap <= 1e-9;
    }
    rep.cross_validation = cv;
  }

  if (!graph) {
    // No gates at all: the product is the identity.
    rep.succeeded = cfg.trials;
    rep.log_estimate = h.n() * std::log(2.0);
    rep.estimate = std::ldexp(1.0, h.n());
    return rep;
  }

  if (cfg.mode == SamplerMode::Theory && rep.plan.projected_steps > cfg.work_budget)
    throw Error(ErrorCode::BudgetExceeded,
                "theory-mode plan needs about " + std::to_string(rep.plan.projected_steps) +
                    " chain steps; use practical mode or raise the work budget");

  EstimatorConfig ec;
  ec.samples_per_level = rep.plan.samples;
  ec.delta = rep.plan.delta;
  ec.q_coeff = cfg.q_coeff;
  ec.mode = cfg.mode;
  ec.seed = derive_seed(cfg.seed, {stream::kPipeline});
  ec.trials = cfg.trials;
  ec.steps = cfg.steps;
  ec.step_budget = cfg.step_budget;
  ec.relative_error_target = rep.budget.estimator_eps;
  ec.threads = cfg.threads;

  MedianResult med = estimate_perfmatch(*graph, ec);
  rep.runs = std::move(med.runs);
  rep.succeeded = med.succeeded;
  if (med.majority_aborted) {
    rep.aborted = true;
    rep.abort_detail = std::to_string(cfg.trials - med.succeeded) + " of " + std::to_string(cfg.trials) + " runs aborted";
    for (const EstimateReport& run : rep.runs)
      if (run.aborted) {
        rep.abort_detail += "; first at level " + std::to_string(run.abort_level) + ": " + std::string(to_string(run.abort_reason));
        break;
      }
    return rep;
  }
  rep.log_estimate = std::log(med.estimate) + rep.plan.idle_qubits * std::log(2.0);
  rep.estimate = std::exp(rep.log_estimate);
  return rep;
}

struct EnergyReport {
  double value = 0.0;       // F(beta) or the E_0 estimate
  double beta = 0.0;
  double delta_abs = 0.0;   // absolute error target
  double eps = 0.0;         // relative-error target handed to estimate_partition
  PartitionReport partition;
};

/// eps so that a relative error eps on Z moves F by at most delta_abs.
inline double free_energy_eps(double beta, double delta_abs) { return std::min(0.5, beta * delta_abs / 2.0); }

/// F = -log(Z) / beta to absolute error delta_abs. cfg.beta and cfg.eps are
/// overwritten.
inline EnergyReport estimate_free_energy(const FerroHamiltonian& h, double beta, double delta_abs, PipelineConfig cfg) {
  if (!(delta_abs > 0.0)) throw Error(ErrorCode::InvalidInput, "absolute error target must be positive");
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidInput, "beta must be positive");
  cfg.beta = beta;
  cfg.eps = free_energy_eps(beta, delta_abs);
  EnergyReport out;
  out.beta = beta;
  out.delta_abs = delta_abs;
  out.eps = cfg.eps;
  out.partition = estimate_partition(h, cfg);
  if (!out.partition.aborted) out.value = -out.partition.log_estimate / beta;
  return out;
}

/// E_0 to absolute error delta_abs via F at beta = 2n / delta_abs estimated to
/// delta_abs / 2.
inline EnergyReport estimate_ground_energy(const FerroHamiltonian& h, double delta_abs, PipelineConfig cfg) {
  if (!(delta_abs > 0.0)) throw Error(ErrorCode::InvalidInput, "absolute error target must be positive");
  const double beta = 2.0 * h.n() / delta_abs;
  EnergyReport out = estimate_free_energy(h, beta, delta_abs / 2.0, std::move(cfg));
  out.delta_abs = delta_abs;
  return out;
}

}  // namespace ferroqmc
