#include "rnd/selection.hpp"

#include <cmath>
#include <stdexcept>

namespace rnd {

void validate_indices(const IndexFunctions& idx) {
  if (!(idx.s > 0.0) || !(idx.s <= 0.5) || !std::isfinite(idx.s))
    throw std::invalid_argument("selection: s must lie in (0, 1/2]");
  if (!(idx.r > 0.0) || !(idx.r <= 0.5) || !std::isfinite(idx.r))
    throw std::invalid_argument("selection: r must lie in (0, 1/2]");
}

void validate_policy(const SelectionPolicy& policy) {
  validate_indices(policy.indices);
  if (!(policy.delta > 0.0) || !(policy.delta < 1.0))
    throw std::invalid_argument("selection: delta must lie in (0, 1)");
  if (!(policy.c_subsample > 0.0) || !std::isfinite(policy.c_subsample))
    throw std::invalid_argument("selection: subsample constant must be positive");
}

namespace {

double positive_arg(double t, const char* who) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument(std::string(who) + ": argument must be positive and finite");
  return t;
}

}  // namespace

double theta(const IndexFunctions& idx, double t) {
  validate_indices(idx);
  return std::pow(positive_arg(t, "theta"), 1.0 + idx.s - idx.r);
}

double theta_bar(const IndexFunctions& idx, double t) {
  validate_indices(idx);
  return std::pow(positive_arg(t, "theta_bar"), 0.5 + idx.s - idx.r);
}

double theta_inverse(const IndexFunctions& idx, double u) {
  validate_indices(idx);
  return std::pow(positive_arg(u, "theta_inverse"), 1.0 / (1.0 + idx.s - idx.r));
}

double theta_bar_inverse(const IndexFunctions& idx, double u) {
  validate_indices(idx);
  return std::pow(positive_arg(u, "theta_bar_inverse"), 1.0 / (0.5 + idx.s - idx.r));
}

AlphaChoice choose_alpha(const SelectionPolicy& policy, Index n, Index m) {
  validate_policy(policy);
  if (n < 1 || m < 1) throw std::invalid_argument("choose_alpha: sample sizes must be positive");
  const double u = 1.0 / std::sqrt(static_cast<double>(n)) + 1.0 / std::sqrt(static_cast<double>(m));
  AlphaChoice choice;
  choice.value = policy.indices.regime == Regime::in_rkhs ? theta_inverse(policy.indices, u)
                                                          : theta_bar_inverse(policy.indices, u);
  choice.admissible_lo =
      std::log(static_cast<double>(n) / policy.delta) / static_cast<double>(n);
  if (choice.value < choice.admissible_lo) {
    choice.value = choice.admissible_lo;
    choice.clamped = true;
  }
  return choice;
}

Index choose_subsample_size(const SelectionPolicy& policy, double n_inf_alpha, double alpha,
                            Index n, Index m) {
  validate_policy(policy);
  if (n < 1 || m < 1)
    throw std::invalid_argument("choose_subsample_size: sample sizes must be positive");
  if (!(n_inf_alpha > 0.0) || !std::isfinite(n_inf_alpha))
    throw std::invalid_argument("choose_subsample_size: capacity must be positive and finite");
  positive_arg(alpha, "choose_subsample_size");
  const double log_alpha = std::max(std::log(1.0 / alpha), 1.0);
  const double log_delta = std::log(1.0 / policy.delta);
  const double raw = policy.c_subsample * n_inf_alpha * log_alpha * log_delta;
  const Index cap = std::min(n, m);
  Index size = static_cast<Index>(std::ceil(raw));
  if (size < 1) size = 1;
  if (size > cap) size = cap;
  return size;
}

double theory_rate_exponent(const IndexFunctions& idx, RateMetric metric) {
  validate_indices(idx);
  const double s = idx.s;
  const double r = idx.r;
  switch (metric) {
    case RateMetric::hk:
      return s / (s + 1.0 - r);
    case RateMetric::l2:
      return (1.0 + 2.0 * s) / (2.0 * (s + 1.0 - r));
    case RateMetric::embedded_hk:
      return (1.0 + 2.0 * s) / (2.0 * (s - r + 1.0));
    case RateMetric::embedded_l2:
      return 2.0 * s / (2.0 * (s - r) + 1.0);
  }
  throw std::logic_error("selection: unknown rate metric");
}

double invert_increasing(const std::function<double(double)>& fn, double target, double lo,
                         double hi, double rel_tol) {
  if (!(lo > 0.0) || !(hi > lo))
    throw std::invalid_argument("invert_increasing: need 0 < lo < hi");
  if (fn(lo) > target || fn(hi) < target)
    throw std::invalid_argument("invert_increasing: target not bracketed by [lo, hi]");
  while (hi - lo > rel_tol * 0.5 * (hi + lo)) {
    const double mid = 0.5 * (lo + hi);
    if (fn(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double TabulatedIndexFunction::operator()(double x) const {
  const Index n = t.size();
  if (n < 2 || phi.size() != n)
    throw std::invalid_argument("tabulated index function: need matching grids with >= 2 nodes");
  positive_arg(x, "tabulated index function");
  for (Index i = 0; i < n; ++i)
    if (!(t(i) > 0.0) || !(phi(i) > 0.0) || (i > 0 && !(t(i) > t(i - 1))))
      throw std::invalid_argument("tabulated index function: grids must be positive increasing");
  // clamp outside the table, log-log linear inside
  if (x <= t(0)) return phi(0);
  if (x >= t(n - 1)) return phi(n - 1);
  Index k = 0;
  while (k + 1 < n && t(k + 1) < x) ++k;
  const double w = (std::log(x) - std::log(t(k))) / (std::log(t(k + 1)) - std::log(t(k)));
  return std::exp((1.0 - w) * std::log(phi(k)) + w * std::log(phi(k + 1)));
}

double theta_inverse_tabulated(const TabulatedIndexFunction& phi, double r, double u) {
  if (!(r > 0.0) || !(r <= 0.5))
    throw std::invalid_argument("theta_inverse_tabulated: r must lie in (0, 1/2]");
  positive_arg(u, "theta_inverse_tabulated");
  auto theta_fn = [&](double t) { return std::pow(t, 1.0 - r) * phi(t); };
  // Bracket from the table's range, widened geometrically if needed.
  double lo = phi.t(0);
  double hi = phi.t(phi.t.size() - 1);
  int guard = 0;
  while (theta_fn(lo) > u) {
    lo *= 0.5;
    if (++guard > 200) throw std::invalid_argument("theta_inverse_tabulated: cannot bracket");
  }
  guard = 0;
  while (theta_fn(hi) < u) {
    hi *= 2.0;
    if (++guard > 200) throw std::invalid_argument("theta_inverse_tabulated: cannot bracket");
  }
  return invert_increasing(theta_fn, u, lo, hi);
}

}  // namespace rnd
