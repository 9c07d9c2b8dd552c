#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ferroqmc/error.hpp"
#include "ferroqmc/graph.hpp"
#include "ferroqmc/rng.hpp"
#include "ferroqmc/sampler.hpp"

namespace ferroqmc {

/// Parameters of the ratio-telescoping estimator.
struct EstimatorConfig {
  long long samples_per_level = 1000;  // T
  double delta = 0.1;                  // sampler precision
  double q_coeff = 1.0;                // q(N) = q_coeff N^2
  SamplerMode mode = SamplerMode::Practical;
  std::uint64_t seed = 0;
  int trials = 1;              // odd; median amplification
  long long steps = 0;         // chain steps per sample; 0 = default_steps at each level
  StepBudget step_budget{};
  double relative_error_target = 0.0;  // recorded in the report only
  unsigned threads = 0;        // 0 = hardware concurrency
};

enum class AbortReason { None, AlphaTooLarge, AlphaTooSmall, EmptyLevelK, EmptyLevelK1 };

inline std::string_view to_string(AbortReason r) {
  switch (r) {
    case AbortReason::None: return "none";
    case AbortReason::AlphaTooLarge: return "alpha_k > 2 q(N)";
    case AbortReason::AlphaTooSmall: return "alpha_k < 1 / (2 sum w)";
    case AbortReason::EmptyLevelK: return "p_k = 0";
    case AbortReason::EmptyLevelK1: return "p_{k+1} = 0";
  }
  return "?";
}

struct LevelRecord {
  int k = 0;
  double alpha = 0.0;  // alpha_k, the weight multiplier sampled at
  double p_k = 0.0;
  double p_k1 = 0.0;
  long long steps = 0;
};

/// Result of one run. An aborted run carries no estimate: a perfect-matching
/// sum of zero cannot be certified by the ratio estimator, so every "return
/// 0" branch is reported as a failure.
struct EstimateReport {
  double estimate = 0.0;
  double log_estimate = 0.0;
  bool aborted = false;
  AbortReason abort_reason = AbortReason::None;
  int abort_level = 0;
  double relative_error_target = 0.0;
  SamplerMode mode = SamplerMode::Practical;
  std::uint64_t seed = 0;
  int trial = 0;
  std::vector<LevelRecord> levels;  // one per completed or attempted level
  SamplerStats sampler;
  double wall_seconds = 0.0;  // excluded from serialisation by default
};

namespace detail {

inline unsigned resolve_threads(unsigned t) { return t == 0 ? default_thread_count() : t; }

inline void check_estimable(const WeightedMultigraph& g) {
  if (g.num_vertices() % 2 != 0) throw Error(ErrorCode::OddVertexCount, "perfect matchings need an even vertex count");
  if (g.num_vertices() == 0 || g.num_edges() == 0)
    throw Error(ErrorCode::InvalidInput, "estimator needs at least one edge");
}

}  // namespace detail

/// Draws the T matching sizes for one level: called with alpha_k and k, may
/// record the chain length in the level and add to the sampler statistics.
using LevelSampler = std::function<std::vector<int>(double alpha, int k, LevelRecord& level, SamplerStats& stats)>;

/// One run of the estimator on g with an arbitrary level sampler.
///
///   alpha_1 = 1 / sum w,  Pi = sum w
///   for k = 1 .. N-1:
///     stop if alpha_k > 2 q(N) or alpha_k < 1 / (2 sum w)
///     draw T matchings from Gamma(alpha_k)
///     p_k, p_{k+1} = fractions with k and k+1 edges; stop if either is 0
///     alpha_{k+1} = alpha_k p_k / p_{k+1};  Pi = Pi / alpha_{k+1}
///   return Pi
inline EstimateReport algorithm_b(const WeightedMultigraph& g, const EstimatorConfig& cfg, int trial,
                                  const LevelSampler& draw) {
  detail::check_estimable(g);
  if (cfg.samples_per_level < 1) throw Error(ErrorCode::InvalidInput, "samples per level must be positive");
  if (!(cfg.q_coeff > 0.0)) throw Error(ErrorCode::InvalidInput, "q_coeff must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw Error(ErrorCode::InvalidInput, "delta must lie in (0,1)");

  const auto started = std::chrono::steady_clock::now();
  EstimateReport rep;
  rep.relative_error_target = cfg.relative_error_target;
  rep.mode = cfg.mode;
  rep.seed = cfg.seed;
  rep.trial = trial;

  const int n_half = g.num_vertices() / 2;
  const double sum_w = g.total_weight();
  const double q_n = cfg.q_coeff * n_half * n_half;

  double alpha = 1.0 / sum_w;
  double log_pi = std::log(sum_w);

  for (int k = 1; k <= n_half - 1; ++k) {
    LevelRecord level{k, alpha, 0.0, 0.0, 0};
    if (alpha > 2.0 * q_n || alpha < 1.0 / (2.0 * sum_w)) {
      rep.aborted = true;
      rep.abort_reason = alpha > 2.0 * q_n ? AbortReason::AlphaTooLarge : AbortReason::AlphaTooSmall;
      rep.abort_level = k;
      rep.levels.push_back(level);
      break;
    }
    const std::vector<int> sizes = draw(alpha, k, level, rep.sampler);
    long long at_k = 0, at_k1 = 0;
    for (int s : sizes) {
      at_k += s == k;
      at_k1 += s == k + 1;
    }
    const double t = static_cast<double>(sizes.size());
    level.p_k = static_cast<double>(at_k) / t;
    level.p_k1 = static_cast<double>(at_k1) / t;
    rep.levels.push_back(level);
    if (at_k == 0 || at_k1 == 0) {
      rep.aborted = true;
      rep.abort_reason = at_k == 0 ? AbortReason::EmptyLevelK : AbortReason::EmptyLevelK1;
      rep.abort_level = k;
      break;
    }
    alpha = alpha * level.p_k / level.p_k1;
    log_pi -= std::log(alpha);
  }

  if (!rep.aborted) {
    rep.log_estimate = log_pi;
    rep.estimate = std::exp(log_pi);
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

/// One run with the matching chain as the sampler. Level k of trial i draws
/// its chains from the substream (seed, estimator/i, k).
inline EstimateReport algorithm_b(const WeightedMultigraph& g, const EstimatorConfig& cfg, int trial = 0) {
  const unsigned threads = detail::resolve_threads(cfg.threads);
  return algorithm_b(g, cfg, trial, [&](double alpha, int k, LevelRecord& level, SamplerStats& stats) {
    level.steps = cfg.steps > 0 ? cfg.steps : default_steps(g, cfg.delta, cfg.mode, alpha, cfg.step_budget);
    return sample_sizes(g, alpha, level.steps, static_cast<std::size_t>(cfg.samples_per_level), cfg.seed,
                        (static_cast<std::uint64_t>(stream::kEstimator) << 32) | static_cast<std::uint32_t>(trial),
                        static_cast<std::uint64_t>(k), threads, &stats);
  });
}

struct TheoryParams {
  long long samples_per_level = 1;  // T
  double delta = 0.0;
};

/// T = ceil(c_T eps^-2 N^4 |E|^2 w_max^2 (c_q N^2)^2 max(1, log N)),
/// delta = eps / (c_2 N).
inline TheoryParams theory_params(const WeightedMultigraph& g, double eps, double q_coeff = 1.0,
                                  double c_t = 1.0, double c_2 = 8.0) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidInput, "eps must lie in (0,1)");
  const double n = std::max(1, g.num_vertices() / 2);
  const double ne = g.num_edges();
  const double w_max = graph_stats(g).w_max;
  const double q = q_coeff * n * n;
  const double t = c_t / (eps * eps) * std::pow(n, 4) * ne * ne * w_max * w_max * q * q * std::max(1.0, std::log(n));
  TheoryParams out;
  out.samples_per_level = t >= 9.0e18 ? static_cast<long long>(9.0e18) : std::max(1LL, static_cast<long long>(std::ceil(t)));
  out.delta = eps / (c_2 * n);
  return out;
}

struct MedianResult {
  double estimate = 0.0;
  int trials = 0;
  int succeeded = 0;
  bool majority_aborted = false;
  std::vector<EstimateReport> runs;
};

/// Runs `trials` independent estimates and takes the median of those that did
/// not abort. When the survivors are even in number the lower middle value is
/// used. Never throws on aborts; see amplify_median.
inline MedianResult collect_median(const std::function<EstimateReport(int)>& run, int trials) {
  if (trials < 1 || trials % 2 == 0) throw Error(ErrorCode::InvalidInput, "trials must be odd and positive");
  MedianResult out;
  out.trials = trials;
  std::vector<double> values;
  for (int i = 0; i < trials; ++i) {
    out.runs.push_back(run(i));
    if (!out.runs.back().aborted) values.push_back(out.runs.back().estimate);
  }
  out.succeeded = static_cast<int>(values.size());
  out.majority_aborted = 2 * out.succeeded <= trials;
  if (!values.empty()) {
    std::sort(values.begin(), values.end());
    out.estimate = values[(values.size() - 1) / 2];
  }
  return out;
}

inline MedianResult amplify_median(const std::function<EstimateReport(int)>& run, int trials) {
  MedianResult out = collect_median(run, trials);
  if (out.majority_aborted)
    throw Error(ErrorCode::MajorityAborted,
                std::to_string(trials - out.succeeded) + " of " + std::to_string(trials) + " runs aborted");
  return out;
}

/// Hoeffding bound on the probability that the median of `trials`
/// independent runs, each good with probability p_good > 1/2, is bad.
inline double median_failure_bound(int trials, double p_good) {
  const double gap = p_good - 0.5;
  return std::exp(-2.0 * trials * gap * gap);
}

inline MedianResult estimate_perfmatch(const WeightedMultigraph& g, const EstimatorConfig& cfg) {
  return collect_median([&](int trial) { return algorithm_b(g, cfg, trial); }, cfg.trials);
}

}  // namespace ferroqmc
