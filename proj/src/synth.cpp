#include "rnd/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "rnd/parallel.hpp"
#include "rnd/rng.hpp"

namespace rnd {

namespace {

constexpr std::uint64_t kTagP = 0x70;       // 'p'
constexpr std::uint64_t kTagQ = 0x71;       // 'q'
constexpr std::uint64_t kChunkTag = 0xc4;   // MC chunk streams
constexpr Index kChunkSize = 4096;

void validate_component(const GaussComponent& comp, Index d, const char* who) {
  if (comp.mean.size() != d || comp.sigma.size() != d)
    throw std::invalid_argument(std::string(who) + ": component dimension mismatch");
  if (!(comp.weight > 0.0)) throw std::invalid_argument(std::string(who) + ": weights must be positive");
  for (Index k = 0; k < d; ++k)
    if (!(comp.sigma(k) > 0.0) || !std::isfinite(comp.sigma(k)) || !std::isfinite(comp.mean(k)))
      throw std::invalid_argument(std::string(who) + ": component parameters must be finite, sigma > 0");
}

// Certified bound on sup_x N(x; mq, sq^2) / N(x; mp, sp^2) over one axis.
// With sq < sp the log-ratio is a downward parabola maximized at a finite
// vertex; with sq == sp boundedness forces mq == mp and the bound is sp/sq.
double axis_ratio_bound(double mp, double sp, double mq, double sq, const char* who) {
  if (sq > sp)
    throw std::invalid_argument(std::string(who) +
                                ": q must not have larger variance than p in any axis");
  if (sq == sp) {
    if (mq != mp)
      throw std::invalid_argument(std::string(who) +
                                  ": equal variances require equal means for a bounded ratio");
    return 1.0;
  }
  const double aq = 1.0 / (2.0 * sq * sq);
  const double ap = 1.0 / (2.0 * sp * sp);
  const double peak = (aq * mq - ap * mp) * (aq * mq - ap * mp) / (aq - ap) -
                      (aq * mq * mq - ap * mp * mp);
  return (sp / sq) * std::exp(peak);
}

double validate_pair(const SyntheticPair& pair) {
  if (pair.d < 1) throw std::invalid_argument("synthetic pair: dimension must be positive");
  validate_component(pair.p, pair.d, "synthetic pair (p)");
  if (pair.q_components.empty())
    throw std::invalid_argument("synthetic pair: q needs at least one component");
  double weight_sum = 0.0;
  double bound = 0.0;
  for (const auto& comp : pair.q_components) {
    validate_component(comp, pair.d, "synthetic pair (q)");
    weight_sum += comp.weight;
    double comp_bound = 1.0;
    for (Index k = 0; k < pair.d; ++k)
      comp_bound *= axis_ratio_bound(pair.p.mean(k), pair.p.sigma(k), comp.mean(k), comp.sigma(k),
                                     "synthetic pair");
    bound += comp.weight * comp_bound;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12)
    throw std::invalid_argument("synthetic pair: mixture weights must sum to one");
  return bound;
}

double log_gauss_density(const GaussComponent& comp, const Eigen::Ref<const Vector>& x) {
  double acc = 0.0;
  for (Index k = 0; k < x.size(); ++k) {
    const double z = (x(k) - comp.mean(k)) / comp.sigma(k);
    acc += -0.5 * z * z - std::log(comp.sigma(k));
  }
  return acc - 0.918938533204672741780329736406 * static_cast<double>(x.size());  // log sqrt(2 pi)
}

}  // namespace

SyntheticPair SyntheticPair::gauss_scale(Index d, double sigma_q, double sigma_p) {
  SyntheticPair pair;
  pair.family = PairFamily::gauss_scale;
  pair.d = d;
  pair.p = {Vector::Zero(d), Vector::Constant(d, sigma_p), 1.0};
  pair.q_components = {{Vector::Zero(d), Vector::Constant(d, sigma_q), 1.0}};
  pair.b0 = validate_pair(pair);
  return pair;
}

SyntheticPair SyntheticPair::gauss_shift_scale(const Vector& p_mean, const Vector& p_sigma,
                                               const Vector& q_mean, const Vector& q_sigma) {
  SyntheticPair pair;
  pair.family = PairFamily::gauss_shift_scale;
  pair.d = p_mean.size();
  pair.p = {p_mean, p_sigma, 1.0};
  pair.q_components = {{q_mean, q_sigma, 1.0}};
  pair.b0 = validate_pair(pair);
  return pair;
}

SyntheticPair SyntheticPair::mixture_vs_gauss(const Vector& p_mean, const Vector& p_sigma,
                                              const std::vector<GaussComponent>& q_components) {
  SyntheticPair pair;
  pair.family = PairFamily::mixture_vs_gauss;
  pair.d = p_mean.size();
  pair.p = {p_mean, p_sigma, 1.0};
  pair.q_components = q_components;
  pair.b0 = validate_pair(pair);
  return pair;
}

double true_ratio(const SyntheticPair& pair, const Eigen::Ref<const Vector>& x) {
  if (x.size() != pair.d) throw std::invalid_argument("true_ratio: dimension mismatch");
  const double log_p = log_gauss_density(pair.p, x);
  double q = 0.0;
  for (const auto& comp : pair.q_components)
    q += comp.weight * std::exp(log_gauss_density(comp, x) - log_p);
  return q;
}

namespace {

void fill_gauss_rows(Matrix& pts, Index begin, Index end, const GaussComponent& comp,
                     RandomStream& stream) {
  for (Index i = begin; i < end; ++i)
    for (Index k = 0; k < pts.cols(); ++k)
      pts(i, k) = comp.mean(k) + comp.sigma(k) * stream.next_normal();
}

}  // namespace

Sample draw(const SyntheticPair& pair, SampleLabel which, Index n, std::uint64_t seed) {
  validate_pair(pair);
  if (n < 1) throw std::invalid_argument("draw: sample size must be positive");
  RandomStream stream(derive_seed(seed, which == SampleLabel::p ? kTagP : kTagQ));
  Matrix pts(n, pair.d);
  if (which == SampleLabel::p) {
    fill_gauss_rows(pts, 0, n, pair.p, stream);
  } else if (pair.q_components.size() == 1) {
    fill_gauss_rows(pts, 0, n, pair.q_components[0], stream);
  } else {
    // categorical-then-component: one uniform chooses the component by its
    // cumulative weight, then that component is sampled
    for (Index i = 0; i < n; ++i) {
      const double u = stream.next_unit();
      double cum = 0.0;
      std::size_t pick = pair.q_components.size() - 1;
      for (std::size_t cidx = 0; cidx < pair.q_components.size(); ++cidx) {
        cum += pair.q_components[cidx].weight;
        if (u <= cum) {
          pick = cidx;
          break;
        }
      }
      fill_gauss_rows(pts, i, i + 1, pair.q_components[pick], stream);
    }
  }
  return Sample{std::move(pts), which};
}

namespace {

// Chunked evaluation of mean g(t)^2 over t ~ p with worker-count-independent
// results: chunk c draws from stream derive_seed(seed, kChunkTag + c) and
// partial sums are combined in chunk order.
template <typename PointFn>
double mc_mean_square(const SyntheticPair& pair, Index t_count, std::uint64_t seed,
                      const PointFn& fn) {
  const Index chunks = (t_count + kChunkSize - 1) / kChunkSize;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
  parallel_blocks(chunks, [&](std::int64_t cb, std::int64_t ce) {
    for (Index c = cb; c < ce; ++c) {
      const Index begin = c * kChunkSize;
      const Index count = std::min<Index>(kChunkSize, t_count - begin);
      RandomStream stream(derive_seed(seed, kChunkTag + static_cast<std::uint64_t>(c)));
      Matrix pts(count, pair.d);
      fill_gauss_rows(pts, 0, count, pair.p, stream);
      partial[static_cast<std::size_t>(c)] = fn(pts);
    }
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total / static_cast<double>(t_count);
}

}  // namespace

ErrorReport l2p_error(const SyntheticPair& pair, const RatioModel& model, Index t_count,
                      std::uint64_t seed) {
  validate_pair(pair);
  if (t_count < 1) throw std::invalid_argument("l2p_error: need at least one MC point");
  if (model.kernel.dim != pair.d) throw std::invalid_argument("l2p_error: dimension mismatch");
  const double mean_sq = mc_mean_square(pair, t_count, seed, [&](const Matrix& pts) {
    const Sample probe{pts, SampleLabel::p};
    const Vector fitted = evaluate(model, probe);
    double acc = 0.0;
    for (Index i = 0; i < pts.rows(); ++i) {
      const double diff = true_ratio(pair, pts.row(i).transpose()) - fitted(i);
      acc += diff * diff;
    }
    return acc;
  });
  ErrorReport report;
  report.l2p_error = std::sqrt(mean_sq);
  report.mc_points = t_count;
  report.seed = seed;
  return report;
}

double l2p_distance(const SyntheticPair& pair, const RatioModel& f, const RatioModel& g,
                    Index t_count, std::uint64_t seed) {
  validate_pair(pair);
  if (t_count < 1) throw std::invalid_argument("l2p_distance: need at least one MC point");
  const double mean_sq = mc_mean_square(pair, t_count, seed, [&](const Matrix& pts) {
    const Sample probe{pts, SampleLabel::p};
    const Vector vf = evaluate(f, probe);
    const Vector vg = evaluate(g, probe);
    double acc = 0.0;
    for (Index i = 0; i < pts.rows(); ++i) {
      const double diff = vf(i) - vg(i);
      acc += diff * diff;
    }
    return acc;
  });
  return std::sqrt(mean_sq);
}

double embedded_error(const SyntheticPair& pair, const RatioModel& model, Index t_count,
                      std::uint64_t seed) {
  validate_pair(pair);
  if (t_count < 1 || t_count > 5000)
    throw std::invalid_argument("embedded_error: MC size must lie in [1, 5000]");
  if (model.kernel.dim != pair.d) throw std::invalid_argument("embedded_error: dimension mismatch");
  RandomStream stream(derive_seed(seed, kChunkTag));
  Matrix pts(t_count, pair.d);
  fill_gauss_rows(pts, 0, t_count, pair.p, stream);
  const Sample probe{pts, SampleLabel::p};
  const Vector fitted = evaluate(model, probe);
  Vector w(t_count);
  for (Index i = 0; i < t_count; ++i)
    w(i) = true_ratio(pair, pts.row(i).transpose()) - fitted(i);
  const Matrix k = gram(model.kernel, probe);
  const double norm_sq = w.dot(k * w) / (static_cast<double>(t_count) * static_cast<double>(t_count));
  return std::sqrt(std::max(0.0, norm_sq));
}

}  // namespace rnd
