#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnd/experiments.hpp"
#include "rnd/rng.hpp"

using namespace rnd;

namespace {

Sample random_sample(Index n, std::uint64_t seed) {
  RandomStream s(seed);
  Matrix pts(n, 1);
  for (Index i = 0; i < n; ++i) pts(i, 0) = s.next_normal();
  return Sample{std::move(pts), SampleLabel::p};
}

RunConfig tiny_convergence_config() {
  RunConfig cfg;
  cfg.grid_sizes = {40, 80};
  cfg.seeds = {1, 2, 3};
  cfg.mc_points = 2000;
  cfg.subsample = SubsampleRule::parse("20");
  return cfg;
}

std::size_t count_lines(const std::string& text) {
  std::size_t lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  return lines;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("log_log_slope recovers exact power laws") {
  const std::vector<double> x = {1.0, 2.0, 4.0, 8.0};
  const std::vector<double> square = {1.0, 4.0, 16.0, 64.0};
  CHECK(log_log_slope(x, square) == doctest::Approx(2.0).epsilon(1e-12));
  const std::vector<double> flat = {3.0, 3.0, 3.0, 3.0};
  CHECK(log_log_slope(x, flat) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(log_log_slope(one, one), std::invalid_argument);
  const std::vector<double> three = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(log_log_slope(x, three), std::invalid_argument);  // size mismatch
  const std::vector<double> with_zero = {1.0, 0.0, 4.0, 8.0};
  CHECK_THROWS_AS(log_log_slope(x, with_zero), std::invalid_argument);
  const std::vector<double> same_x = {2.0, 2.0};
  const std::vector<double> two_y = {1.0, 5.0};
  CHECK_THROWS_AS(log_log_slope(same_x, two_y), std::invalid_argument);  // degenerate abscissae
}

TEST_CASE("bench subsample rule frozen values") {
  CHECK(bench_subsample_size(250) == 88);
  CHECK(bench_subsample_size(2000) == 340);
  CHECK(bench_subsample_size(4000) == 525);
  CHECK(bench_subsample_size(8000) == 804);
  CHECK(bench_subsample_size(16000) == 1225);
}

TEST_CASE("select_parameters honors overrides and rules") {
  SelectionPolicy policy;
  const KernelSpec spec = KernelSpec::gaussian(1, 1.0);
  const Sample xp = random_sample(50, 42);

  SUBCASE("alpha override wins") {
    const SelectionOutcome out =
        select_parameters(policy, spec, xp, 50, SubsampleRule::parse("5"), 0, 3.14);
    CHECK(out.alpha == 3.14);
    CHECK_FALSE(out.alpha_clamped);
    CHECK(out.m == 5);
  }

  SUBCASE("no override means the policy rule") {
    const SelectionOutcome out =
        select_parameters(policy, spec, xp, 50, SubsampleRule::parse("5"), 0);
    CHECK(out.alpha == choose_alpha(policy, 50, 50).value);
  }

  SUBCASE("fixed rule validates against min(N, M)") {
    CHECK_THROWS_AS(select_parameters(policy, spec, xp, 4, SubsampleRule::parse("5"), 0),
                    std::invalid_argument);
  }

  SUBCASE("fraction rule takes a ceil of the cap") {
    const SelectionOutcome out =
        select_parameters(policy, spec, xp, 10, SubsampleRule::parse("0.3"), 0);
    CHECK(out.m == 3);  // ceil(0.3 * min(50, 10))
  }

  SUBCASE("automatic rule matches its ingredients") {
    const SelectionOutcome out =
        select_parameters(policy, spec, xp, 50, SubsampleRule{}, 0);
    CHECK(out.n_inf == capacity_sup(spec, xp, out.alpha));
    CHECK(out.m == choose_subsample_size(policy, out.n_inf, out.alpha, 50, 50));
  }

  SUBCASE("capacity probe restriction is deterministic") {
    const SelectionOutcome a = select_parameters(policy, spec, xp, 50, SubsampleRule{}, 20);
    const SelectionOutcome b = select_parameters(policy, spec, xp, 50, SubsampleRule{}, 20);
    CHECK(a.n_inf == b.n_inf);
    CHECK(a.m == b.m);
    CHECK(a.n_inf > 0.0);
  }
}

TEST_CASE("run_convergence on a tiny grid") {
  const RunConfig cfg = tiny_convergence_config();
  const ConvergenceResult result = run_convergence(cfg);

  REQUIRE(result.rows.size() == 6);
  REQUIRE(result.medians.size() == 2);
  CHECK_FALSE(result.any_errors);

  // fixed row order: grid-major, seed-minor
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t s = 0; s < 3; ++s) {
      const ConvergenceRow& row = result.rows[g * 3 + s];
      CHECK(row.n == cfg.grid_sizes[g]);
      CHECK(row.m_sample == row.n);
      CHECK(row.seed == cfg.seeds[s]);
      CHECK(row.error.empty());
      CHECK(row.l2p > 0.0);
      CHECK(row.m_sub == 20);
      CHECK(row.alpha ==
            choose_alpha(cfg.policy, row.n, row.n).value);
      // ledger for a subsampled fit of size m: 2 m^2 evaluations plus
      // m^3/3 + m^2 solver flops (integer division on the cubic)
      CHECK(row.fit_flops == 2 * 400 + 8000 / 3 + 400);
    }
  }

  // medians recomputed independently
  for (std::size_t g = 0; g < 2; ++g) {
    std::vector<double> errs = {result.rows[g * 3].l2p, result.rows[g * 3 + 1].l2p,
                                result.rows[g * 3 + 2].l2p};
    std::sort(errs.begin(), errs.end());
    CHECK(result.medians[g].median_l2p == errs[1]);
    CHECK(result.medians[g].n == cfg.grid_sizes[g]);
    CHECK(result.medians[g].u ==
          2.0 / std::sqrt(static_cast<double>(cfg.grid_sizes[g])));
  }

  // slope recomputed from the medians with the 1/u abscissa
  const std::vector<double> xs = {1.0 / result.medians[0].u, 1.0 / result.medians[1].u};
  const std::vector<double> ys = {result.medians[0].median_l2p, result.medians[1].median_l2p};
  CHECK(result.slope == log_log_slope(xs, ys));

  // determinism end to end
  const ConvergenceResult again = run_convergence(cfg);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    CHECK(result.rows[i].l2p == again.rows[i].l2p);
    CHECK(result.rows[i].alpha == again.rows[i].alpha);
    CHECK(result.rows[i].fit_flops == again.rows[i].fit_flops);
  }
  CHECK(result.slope == again.slope);

  // CSV contract
  std::ostringstream out;
  write_convergence_csv(result, out);
  const std::string text = out.str();
  CHECK(text.rfind("n,m,seed,alpha,m_sub,l2p_error,fit_flops,error\n", 0) == 0);
  CHECK(count_lines(text) == 1 + 6 + 2 + 1);  // header, rows, medians, trailer
  CHECK(text.find(",median,") != std::string::npos);
  CHECK(text.find("# slope=") != std::string::npos);
}

TEST_CASE("run_convergence records row failures instead of throwing") {
  // a polynomial kernel with a tiny declared domain rejects gaussian draws,
  // so every row fails and the failure lands in the row's error column
  RunConfig cfg = tiny_convergence_config();
  cfg.kernel_family = KernelFamily::polynomial;
  cfg.poly_degree = 2;
  cfg.poly_offset = 1.0;
  cfg.poly_radius = 0.01;
  const ConvergenceResult result = run_convergence(cfg);
  CHECK(result.any_errors);
  for (const auto& row : result.rows) CHECK_FALSE(row.error.empty());
  CHECK(result.slope == 0.0);

  std::ostringstream out;
  write_convergence_csv(result, out);
  CHECK(out.str().find("domain") != std::string::npos);
}

TEST_CASE("run_bench ledgers are exact and deterministic") {
  RunConfig cfg;
  cfg.bench_nystrom_sizes = {64, 128};
  cfg.bench_full_sizes = {32, 64};
  const BenchResult result = run_bench(cfg);

  REQUIRE(result.records.size() == 4);
  CHECK_FALSE(result.any_errors);

  // nystrom n = 64: m = ceil(8 ln 64) = 34 -> evals 2 m^2, flops m^3/3 + m^2
  CHECK(result.records[0].n == 64);
  CHECK(result.records[0].mode == FitMode::nystrom);
  CHECK(result.records[0].m_sub == 34);
  CHECK(result.records[0].kernel_evals == 2 * 34 * 34);
  CHECK(result.records[0].solver_flops == (34ull * 34 * 34) / 3 + 34 * 34);
  // nystrom n = 128: m = 55
  CHECK(result.records[1].n == 128);
  CHECK(result.records[1].m_sub == 55);
  CHECK(result.records[1].kernel_evals == 2 * 55 * 55);
  CHECK(result.records[1].solver_flops == (55ull * 55 * 55) / 3 + 55 * 55);
  // full n = 32: evals N^2 + N M, flops N^3/3 only
  CHECK(result.records[2].n == 32);
  CHECK(result.records[2].mode == FitMode::full);
  CHECK(result.records[2].m_sub == 32);
  CHECK(result.records[2].kernel_evals == 2 * 32 * 32);
  CHECK(result.records[2].solver_flops == (32ull * 32 * 32) / 3);
  CHECK(result.records[3].kernel_evals == 2 * 64 * 64);
  CHECK(result.records[3].solver_flops == (64ull * 64 * 64) / 3);

  // exponents equal an independent regression over the same ledgers
  const std::vector<double> nn = {64.0, 128.0};
  const std::vector<double> nc = {
      static_cast<double>(result.records[0].kernel_evals + result.records[0].solver_flops),
      static_cast<double>(result.records[1].kernel_evals + result.records[1].solver_flops)};
  CHECK(result.nystrom_exponent == log_log_slope(nn, nc));
  const std::vector<double> fn = {32.0, 64.0};
  const std::vector<double> fc = {
      static_cast<double>(result.records[2].kernel_evals + result.records[2].solver_flops),
      static_cast<double>(result.records[3].kernel_evals + result.records[3].solver_flops)};
  CHECK(result.full_exponent == log_log_slope(fn, fc));

  // ledger fields are machine independent: a second run reproduces them
  const BenchResult again = run_bench(cfg);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(result.records[i].kernel_evals == again.records[i].kernel_evals);
    CHECK(result.records[i].solver_flops == again.records[i].solver_flops);
  }
  CHECK(result.nystrom_exponent == again.nystrom_exponent);

  std::ostringstream out;
  write_bench_csv(result, out);
  const std::string text = out.str();
  CHECK(text.rfind("n,m_sub,mode,kernel_evals,solver_flops,wall_seconds,error\n", 0) == 0);
  CHECK(count_lines(text) == 1 + 4 + 2);
  CHECK(text.find("# nystrom_exponent=") != std::string::npos);
  CHECK(text.find("# full_exponent=") != std::string::npos);
}

}  // TEST_SUITE
