#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnd/kernel.hpp"

namespace rnd {

enum class FitMode { full, nystrom };

// Deterministic cost ledger of a fit: nominal kernel-evaluation and solver
// flop counts (N^2 + N M evaluations and the pure factorization cubic
// N^3/3 for the full system; m^2 + m^2 and m^3/3 + m^2 for the subsampled
// one, whose substitution term is not negligible against its cubic).
// Machine independent, so cost-scaling claims can be checked exactly.
struct FitCost {
  std::uint64_t kernel_evals = 0;
  std::uint64_t solver_flops = 0;
  std::uint64_t total() const { return kernel_evals + solver_flops; }
};

// Fitted ratio estimate
//   beta(t) = sum_i c_i k(t, p_center_i) + c_prime * sum_j k(t, q_center_j)
// where every q-coefficient equals the same scalar c_prime = 1/(alpha * M)
// with M the full q-sample size (not the subsample size).
struct RatioModel {
  KernelSpec kernel;
  double alpha = 0.0;
  Matrix p_centers;
  Matrix q_centers;
  Vector c;
  double c_prime = 0.0;
  std::int64_t n_full = 0;
  std::int64_t m_full = 0;
  FitMode mode = FitMode::full;
  FitCost cost;  // not persisted
};

// Uniform without-replacement subsample of each side.  Indices are sorted
// and distinct; the draw is reproducible across platforms (mt19937_64 with
// masked-rejection bounded integers and a partial Fisher-Yates shuffle,
// p side first, then q, from one stream).
struct NystromPlan {
  std::vector<Index> p_indices;
  std::vector<Index> q_indices;
  std::uint64_t seed = 0;
  Index m() const { return static_cast<Index>(p_indices.size()); }
};

NystromPlan subsample_plan(Index n_p, Index n_q, Index m, std::uint64_t seed);

// Solves the full N x N system (alpha I + K_pp / N) c = -(1/(alpha M N)) K_pq 1.
RatioModel fit_full(const KernelSpec& spec, const Sample& xp, const Sample& xq, double alpha);

// Same system restricted to the subsampled centers, keeping the full N and
// M in every scaling; with the identity plan it reproduces fit_full exactly.
RatioModel fit_nystrom(const KernelSpec& spec, const Sample& xp, const Sample& xq, double alpha,
                       const NystromPlan& plan);

// Pointwise evaluation of the expansion at each row of t.
Vector evaluate(const RatioModel& model, const Sample& t);

// RKHS distance ||f - g||_H via the Gram quadratic form over the merged
// centers of both models.  Both models must share the same kernel spec.
double rkhs_distance(const KernelSpec& spec, const RatioModel& f, const RatioModel& g);

// Model persistence: a versioned JSON document with decimal floating-point
// fields carrying 17 significant digits, so evaluation round-trips bitwise
// on any machine.
std::string model_to_json(const RatioModel& model);
RatioModel model_from_json(const std::string& text);
void save_model(const RatioModel& model, const std::string& path);
RatioModel load_model(const std::string& path);

}  // namespace rnd
