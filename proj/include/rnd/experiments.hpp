#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rnd/capacity.hpp"
#include "rnd/config.hpp"
#include "rnd/estimator.hpp"
#include "rnd/selection.hpp"
#include "rnd/synth.hpp"

namespace rnd {

// ---- parameter selection glue -------------------------------------------

struct SelectionOutcome {
  double alpha = 0.0;
  bool alpha_clamped = false;
  double n_inf = 0.0;   // capacity sup used by the subsample rule
  Index m = 0;          // chosen subsample size
};

// alpha from the policy (unless an override is given), the capacity sup on
// the p-sample (restricted to a deterministic probe subsample of
// `capacity_probe` points when the sample is larger; 0 = use all), and the
// subsample size from the rule.
SelectionOutcome select_parameters(const SelectionPolicy& policy, const KernelSpec& spec,
                                   const Sample& xp, Index m_sample, const SubsampleRule& rule,
                                   Index capacity_probe, double alpha_override = 0.0);

// ---- convergence experiment ----------------------------------------------

struct ConvergenceRow {
  Index n = 0;
  Index m_sample = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  Index m_sub = 0;
  double l2p = 0.0;
  std::uint64_t fit_flops = 0;  // kernel evaluations + solver flops
  std::string error;            // empty on success
};

struct ConvergenceSummary {
  Index n = 0;
  Index m_sample = 0;
  double u = 0.0;
  double median_l2p = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;        // |grid| x |seeds|, fixed order
  std::vector<ConvergenceSummary> medians;  // one per grid size
  // Least-squares slope of log median error against log(1/u); negative when
  // the error decays as samples grow, with |slope| the decay exponent in u.
  double slope = 0.0;
  bool any_errors = false;
};

ConvergenceResult run_convergence(const RunConfig& cfg);
void write_convergence_csv(const ConvergenceResult& result, std::ostream& out);

// ---- cost scaling experiment ----------------------------------------------

struct CostRecord {
  Index n = 0;
  Index m_sub = 0;
  FitMode mode = FitMode::nystrom;
  std::uint64_t kernel_evals = 0;
  std::uint64_t solver_flops = 0;
  double wall_seconds = 0.0;
  std::string error;
};

struct BenchResult {
  std::vector<CostRecord> records;
  double nystrom_exponent = 0.0;
  double full_exponent = 0.0;
  bool any_errors = false;
};

// Nystrom sweeps use m = ceil(sqrt(N) * ln N).
Index bench_subsample_size(Index n);
BenchResult run_bench(const RunConfig& cfg);
void write_bench_csv(const BenchResult& result, std::ostream& out);

// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rnd
