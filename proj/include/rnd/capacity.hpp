#pragma once

#include "rnd/kernel.hpp"

namespace rnd {

// Empirical capacity functions of a kernel over a p-sample of size N with
// Gram matrix K:
//
//   per point   N_hat_i(alpha)  = [(alpha I + K/N)^{-1} K]_{ii}
//   average     N_hat(alpha)    = sum_i lambda_i / (lambda_i + alpha),
//                                 lambda_i the eigenvalues of K/N
//   supremum    N_hat_inf(alpha) = max_i N_hat_i(alpha)
//
// The average admits two redundant routes (factor-and-solve diagonal vs the
// eigenvalue sum); both are exposed and must agree to 1e-8, which the test
// suite enforces as a standing cross-check.

// Factor-and-solve route for the per-point capacities.
Vector capacity_diag(const KernelSpec& spec, const Sample& xp, double alpha);
Vector capacity_diag_gram(const Matrix& k, double alpha);

// Eigenvalue route for the average capacity.
double effective_dimension(const KernelSpec& spec, const Sample& xp, double alpha);
double effective_dimension_gram(const Matrix& k, double alpha);
double effective_dimension_eigvals(const Eigen::Ref<const Vector>& lambda, double alpha);

// Supremum over the observed sample (plug-in for the population sup).
double capacity_sup(const KernelSpec& spec, const Sample& xp, double alpha);
double capacity_sup_gram(const Matrix& k, double alpha);

// The balancing point alpha* solving N_hat(alpha)/alpha = N, located by
// bisection to relative width 1e-10.  The initial bracket is
// [1e-12, trace(K/N)], widened by doubling if the right end still has
// N_hat/alpha >= N.
double alpha_star(const KernelSpec& spec, const Sample& xp);
double alpha_star_gram(const Matrix& k);

// Capacity profile over a log-spaced alpha grid (default 20 points from
// alpha*/10 up to 1.0), built from one eigendecomposition.
struct CapacityProfile {
  Vector alphas;
  Vector n_eff;
  Vector n_inf;
  double alpha_star = 0.0;
  Index n_points = 0;
};

CapacityProfile capacity_profile(const KernelSpec& spec, const Sample& xp, Index grid_size = 20);

}  // namespace rnd
