#include "rnd/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rnd/csv.hpp"
#include "rnd/parallel.hpp"
#include "rnd/rng.hpp"

namespace rnd {

namespace {

constexpr std::uint64_t kProbeTag = 0xcafe;
constexpr std::uint64_t kPlanTag = 0xa11ce;

Sample probe_subsample(const Sample& xp, Index cap, std::uint64_t seed) {
  if (cap <= 0 || xp.size() <= cap) return xp;
  const NystromPlan plan = subsample_plan(xp.size(), xp.size(), cap, derive_seed(seed, kProbeTag));
  Matrix pts(cap, xp.dim());
  for (Index i = 0; i < cap; ++i)
    pts.row(i) = xp.points.row(plan.p_indices[static_cast<std::size_t>(i)]);
  return Sample{std::move(pts), xp.label};
}

}  // namespace

SelectionOutcome select_parameters(const SelectionPolicy& policy, const KernelSpec& spec,
                                   const Sample& xp, Index m_sample, const SubsampleRule& rule,
                                   Index capacity_probe, double alpha_override) {
  SelectionOutcome out;
  if (alpha_override > 0.0) {
    out.alpha = alpha_override;
  } else {
    const AlphaChoice choice = choose_alpha(policy, xp.size(), m_sample);
    out.alpha = choice.value;
    out.alpha_clamped = choice.clamped;
  }
  const Index cap = std::min(xp.size(), m_sample);
  switch (rule.kind) {
    case SubsampleRule::Kind::fixed:
      if (rule.fixed > cap)
        throw std::invalid_argument("subsample: fixed size exceeds min(N, M)");
      out.m = rule.fixed;
      break;
    case SubsampleRule::Kind::fraction:
      out.m = std::max<Index>(1, static_cast<Index>(
                                     std::ceil(rule.fraction * static_cast<double>(cap))));
      break;
    case SubsampleRule::Kind::automatic: {
      const Sample probe = probe_subsample(xp, capacity_probe, 0x9d0e);
      out.n_inf = capacity_sup(spec, probe, out.alpha);
      out.m = choose_subsample_size(policy, out.n_inf, out.alpha, xp.size(), m_sample);
      break;
    }
  }
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("log_log_slope: need two or more matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("log_log_slope: inputs must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("log_log_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

namespace {

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

ConvergenceResult run_convergence(const RunConfig& cfg) {
  const SyntheticPair pair = cfg.pair();
  const KernelSpec spec = cfg.kernel();
  validate_policy(cfg.policy);
  if (cfg.grid_sizes.empty() || cfg.seeds.empty())
    throw std::invalid_argument("convergence: grid sizes and seeds must be non-empty");

  ConvergenceResult result;
  const std::size_t total = cfg.grid_sizes.size() * cfg.seeds.size();
  result.rows.resize(total);

  // one row per (size, seed); rows own their RNG streams, so they can be
  // computed in parallel and written back into fixed slots
  parallel_blocks(static_cast<std::int64_t>(total), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t slot = begin; slot < end; ++slot) {
      const std::size_t g = static_cast<std::size_t>(slot) / cfg.seeds.size();
      const std::size_t s = static_cast<std::size_t>(slot) % cfg.seeds.size();
      const Index n = cfg.grid_sizes[g];
      const std::uint64_t seed = cfg.seeds[s];
      ConvergenceRow row;
      row.n = n;
      row.m_sample = n;
      row.seed = seed;
      try {
        const Sample xp = draw(pair, SampleLabel::p, n, seed);
        const Sample xq = draw(pair, SampleLabel::q, n, seed);
        const SelectionOutcome sel = select_parameters(cfg.policy, spec, xp, xq.size(),
                                                       cfg.subsample, cfg.capacity_probe);
        row.alpha = sel.alpha;
        row.m_sub = sel.m;
        const NystromPlan plan =
            subsample_plan(xp.size(), xq.size(), sel.m, derive_seed(seed, kPlanTag));
        const RatioModel model = fit_nystrom(spec, xp, xq, sel.alpha, plan);
        row.fit_flops = model.cost.total();
        const ErrorReport report = l2p_error(pair, model, cfg.mc_points, seed + kMcSeedOffset);
        row.l2p = report.l2p_error;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      result.rows[static_cast<std::size_t>(slot)] = std::move(row);
    }
  });

  std::vector<double> us, medians;
  for (std::size_t g = 0; g < cfg.grid_sizes.size(); ++g) {
    std::vector<double> errors;
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
      const ConvergenceRow& row = result.rows[g * cfg.seeds.size() + s];
      if (row.error.empty())
        errors.push_back(row.l2p);
      else
        result.any_errors = true;
    }
    ConvergenceSummary summary;
    summary.n = cfg.grid_sizes[g];
    summary.m_sample = cfg.grid_sizes[g];
    summary.u = 2.0 / std::sqrt(static_cast<double>(summary.n));
    if (!errors.empty()) {
      summary.median_l2p = median(errors);
      // abscissa 1/u, so a decaying error shows up as a negative slope whose
      // magnitude is the decay exponent in u
      us.push_back(1.0 / summary.u);
      medians.push_back(summary.median_l2p);
    }
    result.medians.push_back(summary);
  }
  if (us.size() >= 2) result.slope = log_log_slope(us, medians);
  return result;
}

void write_convergence_csv(const ConvergenceResult& result, std::ostream& out) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : result.rows)
    rows.push_back({std::to_string(row.n), std::to_string(row.m_sample), std::to_string(row.seed),
                    csv_num(row.alpha), std::to_string(row.m_sub), csv_num(row.l2p),
                    std::to_string(row.fit_flops), row.error});
  for (const auto& summary : result.medians)
    rows.push_back({std::to_string(summary.n), std::to_string(summary.m_sample), "median", "", "",
                    csv_num(summary.median_l2p), "", ""});
  write_csv(out, {"n", "m", "seed", "alpha", "m_sub", "l2p_error", "fit_flops", "error"}, rows);
  out << "# slope=" << csv_num(result.slope) << "\n";
}

Index bench_subsample_size(Index n) {
  return static_cast<Index>(
      std::ceil(std::sqrt(static_cast<double>(n)) * std::log(static_cast<double>(n))));
}

BenchResult run_bench(const RunConfig& cfg) {
  const SyntheticPair pair = cfg.pair();
  const KernelSpec spec = cfg.kernel();
  BenchResult result;

  auto run_mode = [&](const std::vector<Index>& sizes, FitMode mode) {
    std::vector<double> ns, costs;
    for (const Index n : sizes) {
      CostRecord record;
      record.n = n;
      record.mode = mode;
      try {
        const Sample xp = draw(pair, SampleLabel::p, n, cfg.seed);
        const Sample xq = draw(pair, SampleLabel::q, n, cfg.seed);
        const auto start = std::chrono::steady_clock::now();
        RatioModel model;
        if (mode == FitMode::nystrom) {
          const Index m = std::min(bench_subsample_size(n), n);
          record.m_sub = m;
          const NystromPlan plan =
              subsample_plan(n, n, m, derive_seed(cfg.seed, kPlanTag));
          model = fit_nystrom(spec, xp, xq, 1.0 / std::sqrt(static_cast<double>(n)), plan);
        } else {
          record.m_sub = n;
          model = fit_full(spec, xp, xq, 1.0 / std::sqrt(static_cast<double>(n)));
        }
        record.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        record.kernel_evals = model.cost.kernel_evals;
        record.solver_flops = model.cost.solver_flops;
        ns.push_back(static_cast<double>(n));
        costs.push_back(static_cast<double>(record.kernel_evals + record.solver_flops));
      } catch (const std::exception& e) {
        record.error = e.what();
        result.any_errors = true;
      }
      result.records.push_back(std::move(record));
    }
    return std::pair<std::vector<double>, std::vector<double>>{ns, costs};
  };

  auto [nn, nc] = run_mode(cfg.bench_nystrom_sizes, FitMode::nystrom);
  auto [fn, fc] = run_mode(cfg.bench_full_sizes, FitMode::full);
  if (nn.size() >= 2) result.nystrom_exponent = log_log_slope(nn, nc);
  if (fn.size() >= 2) result.full_exponent = log_log_slope(fn, fc);
  return result;
}

void write_bench_csv(const BenchResult& result, std::ostream& out) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& record : result.records)
    rows.push_back({std::to_string(record.n), std::to_string(record.m_sub),
                    record.mode == FitMode::full ? "full" : "nystrom",
                    std::to_string(record.kernel_evals), std::to_string(record.solver_flops),
                    csv_num(record.wall_seconds), record.error});
  write_csv(out, {"n", "m_sub", "mode", "kernel_evals", "solver_flops", "wall_seconds", "error"},
            rows);
  out << "# nystrom_exponent=" << csv_num(result.nystrom_exponent) << "\n";
  out << "# full_exponent=" << csv_num(result.full_exponent) << "\n";
}

}  // namespace rnd
