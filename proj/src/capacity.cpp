#include "rnd/capacity.hpp"

#include <cmath>
#include <stdexcept>

#include "rnd/linalg.hpp"

namespace rnd {

namespace {

void require_gram(const Matrix& k) {
  if (k.rows() != k.cols() || k.rows() < 1)
    throw std::invalid_argument("capacity: Gram matrix must be square and non-empty");
  if (!k.allFinite()) throw std::invalid_argument("capacity: Gram entries must be finite");
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("capacity: alpha must be positive and finite");
}

// Eigenvalues of K/N, rounding negatives (eigensolver noise) up to zero.
Vector gram_eigenvalues(const Matrix& k) {
  const double n = static_cast<double>(k.rows());
  EigenDecomposition dec = eigh(Matrix(k / n));
  return dec.eigenvalues.cwiseMax(0.0);
}

}  // namespace

Vector capacity_diag_gram(const Matrix& k, double alpha) {
  require_gram(k);
  require_alpha(alpha);
  const double n = static_cast<double>(k.rows());
  SpdFactor factor(Matrix(k / n), alpha);
  Vector diag(k.rows());
  for (Index i = 0; i < k.rows(); ++i) diag(i) = factor.solve(k.col(i))(i);
  return diag;
}

Vector capacity_diag(const KernelSpec& spec, const Sample& xp, double alpha) {
  return capacity_diag_gram(gram(spec, xp), alpha);
}

double effective_dimension_eigvals(const Eigen::Ref<const Vector>& lambda, double alpha) {
  require_alpha(alpha);
  double acc = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) {
    const double l = std::max(lambda(i), 0.0);
    acc += l / (l + alpha);
  }
  return acc;
}

double effective_dimension_gram(const Matrix& k, double alpha) {
  require_gram(k);
  return effective_dimension_eigvals(gram_eigenvalues(k), alpha);
}

double effective_dimension(const KernelSpec& spec, const Sample& xp, double alpha) {
  return effective_dimension_gram(gram(spec, xp), alpha);
}

double capacity_sup_gram(const Matrix& k, double alpha) {
  return capacity_diag_gram(k, alpha).maxCoeff();
}

double capacity_sup(const KernelSpec& spec, const Sample& xp, double alpha) {
  return capacity_sup_gram(gram(spec, xp), alpha);
}

namespace {

double alpha_star_from_eigvals(const Vector& lambda, Index n_points) {
  const double n = static_cast<double>(n_points);
  const double trace = lambda.sum();
  if (!(trace > 0.0))
    throw std::runtime_error("alpha_star: degenerate Gram matrix (zero trace)");
  // g(alpha) = N_hat(alpha)/alpha - N is strictly decreasing; bracket the
  // root and bisect to relative width 1e-10.
  auto g = [&](double alpha) { return effective_dimension_eigvals(lambda, alpha) / alpha - n; };
  double lo = 1e-12;
  double hi = trace;
  if (g(lo) <= 0.0)
    throw std::runtime_error("alpha_star: no sign change on the bracket (degenerate spectrum)");
  int guard = 0;
  while (g(hi) >= 0.0) {
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("alpha_star: bracket widening failed");
  }
  while (hi - lo > 1e-10 * 0.5 * (hi + lo)) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double alpha_star_gram(const Matrix& k) {
  require_gram(k);
  return alpha_star_from_eigvals(gram_eigenvalues(k), k.rows());
}

double alpha_star(const KernelSpec& spec, const Sample& xp) {
  return alpha_star_gram(gram(spec, xp));
}

CapacityProfile capacity_profile(const KernelSpec& spec, const Sample& xp, Index grid_size) {
  if (grid_size < 2) throw std::invalid_argument("capacity_profile: grid must have >= 2 points");
  const Matrix k = gram(spec, xp);
  require_gram(k);
  const Index n = k.rows();
  const double dn = static_cast<double>(n);
  EigenDecomposition dec = eigh(Matrix(k / dn));
  const Vector lambda = dec.eigenvalues.cwiseMax(0.0);

  CapacityProfile profile;
  profile.n_points = n;
  profile.alpha_star = alpha_star_from_eigvals(lambda, n);
  profile.alphas.resize(grid_size);
  profile.n_eff.resize(grid_size);
  profile.n_inf.resize(grid_size);

  const double lo = std::log(profile.alpha_star / 10.0);
  const double hi = std::log(1.0);
  // squared eigenvector table: diag((aI+K/N)^{-1}K)_i = sum_j W_ij n lambda_j/(lambda_j+a)
  const Matrix w = dec.eigenvectors.array().square();
  for (Index g = 0; g < grid_size; ++g) {
    const double t = static_cast<double>(g) / static_cast<double>(grid_size - 1);
    const double alpha = std::exp(lo + (hi - lo) * t);
    profile.alphas(g) = alpha;
    profile.n_eff(g) = effective_dimension_eigvals(lambda, alpha);
    Vector scaled(n);
    for (Index j = 0; j < n; ++j) scaled(j) = dn * lambda(j) / (lambda(j) + alpha);
    profile.n_inf(g) = (w * scaled).maxCoeff();
  }
  return profile;
}

}  // namespace rnd
