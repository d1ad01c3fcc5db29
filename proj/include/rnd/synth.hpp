#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rnd/estimator.hpp"

namespace rnd {

enum class PairFamily { gauss_scale, gauss_shift_scale, mixture_vs_gauss };

// One diagonal Gaussian component N(mean, diag(sigma^2)).
struct GaussComponent {
  Vector mean;
  Vector sigma;
  double weight = 1.0;
};

// A (p, q) pair with known density ratio beta = dq/dp.  p is a single
// diagonal Gaussian; q is a mixture of diagonal Gaussians.  Admissibility
// requires sigma_q <= sigma_p componentwise for every q component, with
// equal means wherever the variances tie, so beta stays bounded; b0 is a
// certified (for mixtures: weighted-sum, not necessarily tight) upper bound
// on sup beta.
struct SyntheticPair {
  PairFamily family = PairFamily::gauss_scale;
  Index d = 1;
  GaussComponent p;
  std::vector<GaussComponent> q_components;
  double b0 = 1.0;

  static SyntheticPair gauss_scale(Index d = 1, double sigma_q = 0.8, double sigma_p = 1.0);
  static SyntheticPair gauss_shift_scale(const Vector& p_mean, const Vector& p_sigma,
                                         const Vector& q_mean, const Vector& q_sigma);
  static SyntheticPair mixture_vs_gauss(const Vector& p_mean, const Vector& p_sigma,
                                        const std::vector<GaussComponent>& q_components);
};

// Closed-form beta(x) = q(x)/p(x).
double true_ratio(const SyntheticPair& pair, const Eigen::Ref<const Vector>& x);

// Deterministic sampling (Box-Muller normals on a fixed 64-bit stream; for
// mixtures a categorical draw selects the component, then the component is
// sampled).  Streams are derived from (seed, label), so the p and q draws
// of one experiment may share a seed without colliding.
Sample draw(const SyntheticPair& pair, SampleLabel which, Index n, std::uint64_t seed);

struct ErrorReport {
  double l2p_error = 0.0;
  std::int64_t mc_points = 0;
  std::uint64_t seed = 0;
  std::optional<double> embedded_hk_error;
};

// Monte Carlo L2(p) error sqrt(mean (beta - beta_hat)^2) over t_count fresh
// p-draws.  The loop runs in fixed-size chunks with per-chunk derived
// streams and an ordered reduction, so the value is independent of the
// worker count.
ErrorReport l2p_error(const SyntheticPair& pair, const RatioModel& model, Index t_count,
                      std::uint64_t seed);

// Monte Carlo distance between two models under p, same machinery.
double l2p_distance(const SyntheticPair& pair, const RatioModel& f, const RatioModel& g,
                    Index t_count, std::uint64_t seed);

// RKHS norm of the embedded residual (1/T) sum_i (beta - beta_hat)(t_i) k(., t_i),
// computed exactly from the T x T Gram of the Monte Carlo points (T <= 5000).
double embedded_error(const SyntheticPair& pair, const RatioModel& model, Index t_count,
                      std::uint64_t seed);

// Offset applied to derive evaluation seeds from training seeds so the two
// never share a stream.
constexpr std::uint64_t kMcSeedOffset = 0x9e3779b9ull;

}  // namespace rnd
