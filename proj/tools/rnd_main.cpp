#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rnd/capacity.hpp"
#include "rnd/config.hpp"
#include "rnd/csv.hpp"
#include "rnd/estimator.hpp"
#include "rnd/experiments.hpp"
#include "rnd/rng.hpp"
#include "rnd/synth.hpp"

namespace {

using namespace rnd;

// Flag values start unset so the precedence is: defaults < config file < flags.
struct CliOverrides {
  std::optional<std::string> kernel;
  std::optional<double> bandwidth;
  std::optional<std::string> alpha;
  std::optional<double> s, r, delta, c_sub;
  std::optional<std::string> regime;
  std::optional<std::string> subsample;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<Index> mc_points;
  std::optional<Index> capacity_probe;
};

void add_common_flags(CLI::App* cmd, std::string& config_path, CliOverrides& over) {
  cmd->add_option("--config", config_path, "Configuration file (TOML-style sections)");
  cmd->add_option("--kernel", over.kernel, "Kernel family: gaussian | laplacian | polynomial");
  cmd->add_option("--bandwidth", over.bandwidth, "Kernel bandwidth sigma");
  cmd->add_option("--alpha", over.alpha, "Regularization: a number, or 'auto'");
  cmd->add_option("--s", over.s, "Smoothness index in (0, 1/2]");
  cmd->add_option("--r", over.r, "Capacity index in (0, 1/2]");
  cmd->add_option("--delta", over.delta, "Confidence level in (0, 1)");
  cmd->add_option("--c-sub", over.c_sub, "Subsample rule leading constant");
  cmd->add_option("--regime", over.regime, "in_rkhs | out_of_rkhs");
  cmd->add_option("--subsample", over.subsample, "auto, a count, or a fraction in (0, 1)");
  cmd->add_option("--mode", over.mode, "nystrom | full");
  cmd->add_option("--seed", over.seed, "Base seed");
  cmd->add_option("--out", over.out, "Output directory");
  cmd->add_option("--mc-points", over.mc_points, "Monte Carlo evaluation points");
  cmd->add_option("--capacity-probe", over.capacity_probe,
                  "Max p-points used for the capacity sup during selection (0 = all)");
}

RunConfig resolve_config(const std::string& config_path, const CliOverrides& over) {
  RunConfig cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  if (over.kernel) cfg.kernel_family = family_from_name(*over.kernel);
  if (over.bandwidth) cfg.bandwidth = *over.bandwidth;
  if (over.s) cfg.policy.indices.s = *over.s;
  if (over.r) cfg.policy.indices.r = *over.r;
  if (over.delta) cfg.policy.delta = *over.delta;
  if (over.c_sub) cfg.policy.c_subsample = *over.c_sub;
  if (over.regime) {
    if (*over.regime == "in_rkhs")
      cfg.policy.indices.regime = Regime::in_rkhs;
    else if (*over.regime == "out_of_rkhs")
      cfg.policy.indices.regime = Regime::out_of_rkhs;
    else
      throw std::invalid_argument("regime must be in_rkhs or out_of_rkhs");
  }
  if (over.subsample) cfg.subsample = SubsampleRule::parse(*over.subsample);
  if (over.mode) {
    if (*over.mode != "nystrom" && *over.mode != "full")
      throw std::invalid_argument("mode must be nystrom or full");
    cfg.mode = *over.mode;
  }
  if (over.seed) cfg.seed = *over.seed;
  if (over.out) cfg.out_dir = *over.out;
  if (over.mc_points) cfg.mc_points = *over.mc_points;
  if (over.capacity_probe) cfg.capacity_probe = *over.capacity_probe;
  return cfg;
}

double resolve_alpha_override(const CliOverrides& over) {
  if (!over.alpha || *over.alpha == "auto") return 0.0;
  try {
    std::size_t used = 0;
    const double v = std::stod(*over.alpha, &used);
    if (used != over.alpha->size() || !(v > 0.0)) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("--alpha expects a positive number or 'auto'");
  }
}

std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  if (!dir.empty()) std::filesystem::create_directories(dir);
  return dir;
}

int cmd_estimate(const RunConfig& cfg, double alpha_override, const std::string& p_path,
                 const std::string& q_path) {
  const Sample xp = read_sample_csv(p_path, SampleLabel::p);
  const Sample xq = read_sample_csv(q_path, SampleLabel::q);
  RunConfig local = cfg;
  local.d = xp.dim();
  const KernelSpec spec = local.kernel();
  const SelectionOutcome sel = select_parameters(local.policy, spec, xp, xq.size(),
                                                 local.subsample, local.capacity_probe,
                                                 alpha_override);
  if (sel.alpha_clamped)
    std::cerr << "warning: alpha clamped up to the admissible band " << sel.alpha << "\n";

  RatioModel model;
  if (local.mode == "full") {
    model = fit_full(spec, xp, xq, sel.alpha);
  } else {
    const NystromPlan plan =
        subsample_plan(xp.size(), xq.size(), sel.m, derive_seed(local.seed, 0xa11ce));
    model = fit_nystrom(spec, xp, xq, sel.alpha, plan);
  }

  const auto dir = ensure_out_dir(local);
  const auto model_path = dir / "model.json";
  save_model(model, model_path.string());

  // bounded probe of the fitted values over the training p-points
  const Index probe_n = std::min<Index>(xp.size(), 512);
  const Sample probe{xp.points.topRows(probe_n), SampleLabel::p};
  const double max_abs = evaluate(model, probe).cwiseAbs().maxCoeff();

  std::cout << "alpha=" << csv_num(model.alpha) << "\n"
            << "m=" << (local.mode == "full" ? xp.size() : sel.m) << "\n"
            << "mode=" << local.mode << "\n"
            << "kernel_evals=" << model.cost.kernel_evals << "\n"
            << "solver_flops=" << model.cost.solver_flops << "\n"
            << "max_abs_beta_on_probe=" << csv_num(max_abs) << "\n"
            << "model=" << model_path.string() << "\n";
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& model_path,
                 const std::string& points_path) {
  const RatioModel model = load_model(model_path);
  const Sample points{read_csv_matrix(points_path), SampleLabel::p};
  const Vector values = evaluate(model, points);
  const auto dir = ensure_out_dir(cfg);
  const auto out_path = dir / "beta.csv";
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + out_path.string() + "'");
  std::vector<std::vector<std::string>> rows;
  for (Index i = 0; i < values.size(); ++i) rows.push_back({csv_num(values(i))});
  write_csv(out, {"beta"}, rows);
  std::cout << "points=" << values.size() << "\n" << "out=" << out_path.string() << "\n";
  return 0;
}

int cmd_convergence(const RunConfig& cfg) {
  const ConvergenceResult result = run_convergence(cfg);
  const auto dir = ensure_out_dir(cfg);
  const auto out_path = dir / "convergence.csv";
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + out_path.string() + "'");
  write_convergence_csv(result, out);
  std::cout << "rows=" << result.rows.size() << "\n"
            << "slope=" << csv_num(result.slope) << "\n"
            << "out=" << out_path.string() << "\n";
  return result.any_errors ? 2 : 0;
}

int cmd_bench(const RunConfig& cfg) {
  const BenchResult result = run_bench(cfg);
  const auto dir = ensure_out_dir(cfg);
  const auto out_path = dir / "bench.csv";
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + out_path.string() + "'");
  write_bench_csv(result, out);
  std::cout << "nystrom_exponent=" << csv_num(result.nystrom_exponent) << "\n"
            << "full_exponent=" << csv_num(result.full_exponent) << "\n"
            << "out=" << out_path.string() << "\n";
  return result.any_errors ? 2 : 0;
}

int cmd_effdim(const RunConfig& cfg, const std::string& p_path) {
  const Sample xp = read_sample_csv(p_path, SampleLabel::p);
  RunConfig local = cfg;
  local.d = xp.dim();
  const CapacityProfile profile = capacity_profile(local.kernel(), xp, local.effdim_grid);
  const auto dir = ensure_out_dir(local);
  const auto out_path = dir / "effdim.csv";
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + out_path.string() + "'");
  std::vector<std::vector<std::string>> rows;
  for (Index g = 0; g < profile.alphas.size(); ++g)
    rows.push_back({csv_num(profile.alphas(g)), csv_num(profile.n_eff(g)),
                    csv_num(profile.n_inf(g))});
  write_csv(out, {"alpha", "n_eff", "n_inf"}, rows);
  out << "# alpha_star=" << csv_num(profile.alpha_star) << "\n";
  std::cout << "alpha_star=" << csv_num(profile.alpha_star) << "\n"
            << "out=" << out_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-ratio estimation via kernel-regularized least squares"};
  app.require_subcommand(1);

  std::string config_path;
  CliOverrides over;
  std::string p_path, q_path, model_path, points_path;

  auto* estimate = app.add_subcommand("estimate", "Fit a ratio model from two sample CSVs");
  estimate->add_option("p_csv", p_path, "p-sample CSV")->required();
  estimate->add_option("q_csv", q_path, "q-sample CSV")->required();
  add_common_flags(estimate, config_path, over);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a saved model at points");
  evaluate_cmd->add_option("points_csv", points_path, "Points CSV")->required();
  evaluate_cmd->add_option("--model", model_path, "Model JSON path")->required();
  add_common_flags(evaluate_cmd, config_path, over);

  auto* convergence = app.add_subcommand("convergence", "Synthetic error-vs-size experiment");
  add_common_flags(convergence, config_path, over);

  auto* bench = app.add_subcommand("bench", "Deterministic cost-scaling sweep");
  add_common_flags(bench, config_path, over);

  auto* effdim = app.add_subcommand("effdim", "Capacity profile of a p-sample");
  effdim->add_option("p_csv", p_path, "p-sample CSV")->required();
  add_common_flags(effdim, config_path, over);

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve_config(config_path, over);
    if (estimate->parsed()) return cmd_estimate(cfg, resolve_alpha_override(over), p_path, q_path);
    if (evaluate_cmd->parsed()) return cmd_evaluate(cfg, model_path, points_path);
    if (convergence->parsed()) return cmd_convergence(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
    if (effdim->parsed()) return cmd_effdim(cfg, p_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
