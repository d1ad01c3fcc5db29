#pragma once

#include <functional>

#include "rnd/types.hpp"

namespace rnd {

enum class Regime { in_rkhs, out_of_rkhs };

// Power-scale smoothness/capacity indices.  Both exponents live in
// (0, 1/2]; the induced calibration functions are
//   theta(t)     = t^{1 + s - r}
//   theta_bar(t) = t^{1/2 + s - r}
// which are strictly increasing on (0, inf) for every admissible (s, r).
struct IndexFunctions {
  double s = 0.5;
  double r = 0.5;
  Regime regime = Regime::in_rkhs;
};

void validate_indices(const IndexFunctions& idx);

double theta(const IndexFunctions& idx, double t);
double theta_bar(const IndexFunctions& idx, double t);
double theta_inverse(const IndexFunctions& idx, double u);
double theta_bar_inverse(const IndexFunctions& idx, double u);

struct SelectionPolicy {
  IndexFunctions indices;
  double delta = 0.1;        // confidence level, in (0, 1)
  double c_subsample = 1.0;  // leading constant of the subsample rule
};

void validate_policy(const SelectionPolicy& policy);

// alpha = theta^{-1}(u) (or theta_bar^{-1}(u) out of the RKHS) at
// u = 1/sqrt(N) + 1/sqrt(M), clamped from below by the admissible band
// log(N/delta)/N (leading constant 1) with a warning flag when the clamp
// bites.
struct AlphaChoice {
  double value = 0.0;
  bool clamped = false;
  double admissible_lo = 0.0;
};

AlphaChoice choose_alpha(const SelectionPolicy& policy, Index n, Index m);

// m = ceil(C * N_hat_inf(alpha) * max(log(1/alpha), 1) * log(1/delta)),
// clamped to [1, min(N, M)].
Index choose_subsample_size(const SelectionPolicy& policy, double n_inf_alpha, double alpha,
                            Index n, Index m);

enum class RateMetric { hk, l2, embedded_hk, embedded_l2 };

// Guaranteed convergence-rate exponents in u = 1/sqrt(N) + 1/sqrt(M):
//   hk           s / (s + 1 - r)
//   l2           (1 + 2s) / (2 (s + 1 - r))
//   embedded_hk  (1 + 2s) / (2 (s - r + 1))
//   embedded_l2  2s / (2 (s - r) + 1)
double theory_rate_exponent(const IndexFunctions& idx, RateMetric metric);

// Generic monotone bisection for inverting a strictly increasing function
// on [lo, hi]; the hook for index functions beyond the power scale.
double invert_increasing(const std::function<double(double)>& fn, double target, double lo,
                         double hi, double rel_tol = 1e-12);

// Experimental: a tabulated index function phi and theta(t) = t^{1-r} phi(t)
// inverted by monotone bisection.  Log-log linear interpolation between the
// table nodes; both grids must be strictly increasing and positive.
struct TabulatedIndexFunction {
  Vector t;
  Vector phi;
  double operator()(double x) const;
};

double theta_inverse_tabulated(const TabulatedIndexFunction& phi, double r, double u);

}  // namespace rnd
