#include "rnd/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rnd/linalg.hpp"
#include "rnd/parallel.hpp"
#include "rnd/rng.hpp"

namespace rnd {

namespace {

void validate_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("fit: alpha must be positive and finite");
}

std::vector<Index> draw_without_replacement(RandomStream& stream, Index n, Index m) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < m; ++i) {
    const Index j = i + static_cast<Index>(stream.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> picked(pool.begin(), pool.begin() + m);
  std::sort(picked.begin(), picked.end());
  return picked;
}

Matrix gather_rows(const Matrix& pts, const std::vector<Index>& idx) {
  Matrix out(static_cast<Index>(idx.size()), pts.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = pts.row(idx[i]);
  return out;
}

void validate_plan(const NystromPlan& plan, Index n_p, Index n_q) {
  const Index m = plan.m();
  if (m < 1) throw std::invalid_argument("fit_nystrom: plan must contain at least one index");
  if (static_cast<Index>(plan.q_indices.size()) != m)
    throw std::invalid_argument("fit_nystrom: plan sides must have equal size");
  auto check_side = [m](const std::vector<Index>& idx, Index n, const char* side) {
    for (Index i = 0; i < m; ++i) {
      const Index v = idx[static_cast<std::size_t>(i)];
      if (v < 0 || v >= n)
        throw std::invalid_argument(std::string("fit_nystrom: ") + side + " index out of range");
      if (i > 0 && v <= idx[static_cast<std::size_t>(i - 1)])
        throw std::invalid_argument(std::string("fit_nystrom: ") + side +
                                    " indices must be sorted and distinct");
    }
  };
  check_side(plan.p_indices, n_p, "p");
  check_side(plan.q_indices, n_q, "q");
}

// Shared solve: (alpha I_k + Kpp / N) c = -(1/(alpha M N)) Kpq 1, where Kpp
// and Kpq are built on the fitted centers but N and M stay the full sizes.
RatioModel fit_on_centers(const KernelSpec& spec, Matrix p_centers, Matrix q_centers,
                          double alpha, Index n_full, Index m_full, FitMode mode) {
  RatioModel model;
  model.kernel = spec;
  model.alpha = alpha;
  model.n_full = n_full;
  model.m_full = m_full;
  model.mode = mode;

  const Sample sp{p_centers, SampleLabel::p};
  const Sample sq{q_centers, SampleLabel::q};
  Matrix kpp = gram(spec, sp);
  Matrix kpq = cross_gram(spec, sp, sq);
  const Index k = p_centers.rows();
  const double n = static_cast<double>(n_full);
  const double m = static_cast<double>(m_full);

  Vector rhs = kpq.rowwise().sum() * (-1.0 / (alpha * m * n));
  SpdSystem sys{kpp / n, alpha};
  std::uint64_t solver_flops = 0;
  model.c = solve_spd(sys, rhs, &solver_flops);
  model.c_prime = 1.0 / (alpha * m);
  model.p_centers = std::move(p_centers);
  model.q_centers = std::move(q_centers);

  const std::uint64_t uk = static_cast<std::uint64_t>(k);
  const std::uint64_t uq = static_cast<std::uint64_t>(model.q_centers.rows());
  model.cost.kernel_evals = uk * uk + uk * uq;
  // Ledger contract: the full-mode series is the pure factorization cubic
  // N^3/3, while the subsampled mode carries its m^2 substitution term.
  model.cost.solver_flops = mode == FitMode::full ? uk * uk * uk / 3 : solver_flops;
  if (!model.c.allFinite())
    throw std::runtime_error("fit: coefficients are not finite (alpha too small?)");
  return model;
}

}  // namespace

NystromPlan subsample_plan(Index n_p, Index n_q, Index m, std::uint64_t seed) {
  if (n_p < 1 || n_q < 1)
    throw std::invalid_argument("subsample_plan: sample sizes must be positive");
  if (m < 1 || m > std::min(n_p, n_q))
    throw std::invalid_argument(
        "subsample_plan: subsample size must lie in [1, min(n_p, n_q)]");
  NystromPlan plan;
  plan.seed = seed;
  RandomStream stream(seed);
  plan.p_indices = draw_without_replacement(stream, n_p, m);
  plan.q_indices = draw_without_replacement(stream, n_q, m);
  return plan;
}

RatioModel fit_full(const KernelSpec& spec, const Sample& xp, const Sample& xq, double alpha) {
  validate_alpha(alpha);
  validate_sample(xp, spec.dim);
  validate_sample(xq, spec.dim);
  return fit_on_centers(spec, xp.points, xq.points, alpha, xp.size(), xq.size(), FitMode::full);
}

RatioModel fit_nystrom(const KernelSpec& spec, const Sample& xp, const Sample& xq, double alpha,
                       const NystromPlan& plan) {
  validate_alpha(alpha);
  validate_sample(xp, spec.dim);
  validate_sample(xq, spec.dim);
  validate_plan(plan, xp.size(), xq.size());
  return fit_on_centers(spec, gather_rows(xp.points, plan.p_indices),
                        gather_rows(xq.points, plan.q_indices), alpha, xp.size(), xq.size(),
                        FitMode::nystrom);
}

Vector evaluate(const RatioModel& model, const Sample& t) {
  validate_sample(t, model.kernel.dim);
  detail::check_domain(model.kernel, t.points);
  const Index n = t.size();
  Vector out(n);
  parallel_blocks(n, [&](std::int64_t begin, std::int64_t end) {
    for (Index i = begin; i < end; ++i) {
      double acc = 0.0;
      for (Index j = 0; j < model.p_centers.rows(); ++j)
        acc += model.c(j) * detail::eval_rows(model.kernel, t.points, i, model.p_centers, j);
      double acc_q = 0.0;
      for (Index j = 0; j < model.q_centers.rows(); ++j)
        acc_q += detail::eval_rows(model.kernel, t.points, i, model.q_centers, j);
      out(i) = acc + model.c_prime * acc_q;
    }
  });
  return out;
}

namespace {

// <f, g>_H for two expansions given as (centers, coefficients) pairs.
double expansion_inner(const KernelSpec& spec, const Matrix& ua, const Vector& ca,
                       const Matrix& ub, const Vector& cb) {
  double acc = 0.0;
  for (Index i = 0; i < ua.rows(); ++i) {
    double row = 0.0;
    for (Index j = 0; j < ub.rows(); ++j) row += cb(j) * detail::eval_rows(spec, ua, i, ub, j);
    acc += ca(i) * row;
  }
  return acc;
}

void merged_expansion(const RatioModel& f, Matrix& centers, Vector& coeffs) {
  const Index np = f.p_centers.rows();
  const Index nq = f.q_centers.rows();
  centers.resize(np + nq, f.p_centers.cols());
  coeffs.resize(np + nq);
  centers.topRows(np) = f.p_centers;
  centers.bottomRows(nq) = f.q_centers;
  coeffs.head(np) = f.c;
  coeffs.tail(nq).setConstant(f.c_prime);
}

}  // namespace

double rkhs_distance(const KernelSpec& spec, const RatioModel& f, const RatioModel& g) {
  if (!(f.kernel == spec) || !(g.kernel == spec))
    throw std::invalid_argument("rkhs_distance: models must share the given kernel spec");
  Matrix uf, ug;
  Vector af, ag;
  merged_expansion(f, uf, af);
  merged_expansion(g, ug, ag);
  const double ff = expansion_inner(spec, uf, af, uf, af);
  const double fg = expansion_inner(spec, uf, af, ug, ag);
  const double gg = expansion_inner(spec, ug, ag, ug, ag);
  return std::sqrt(std::max(0.0, ff - 2.0 * fg + gg));
}

}  // namespace rnd
