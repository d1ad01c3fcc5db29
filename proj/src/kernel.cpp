#include "rnd/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "rnd/parallel.hpp"

namespace rnd {

void validate_sample(const Sample& s, Index expected_dim) {
  if (s.points.rows() < 1) throw std::invalid_argument("sample: must contain at least one point");
  if (s.points.cols() < 1) throw std::invalid_argument("sample: dimension must be at least one");
  if (expected_dim >= 0 && s.points.cols() != expected_dim)
    throw std::invalid_argument("sample: dimension mismatch (expected " +
                                std::to_string(expected_dim) + ", got " +
                                std::to_string(s.points.cols()) + ")");
  if (!s.points.allFinite()) throw std::invalid_argument("sample: entries must be finite");
}

KernelSpec KernelSpec::gaussian(Index d, double sigma) {
  if (d < 1) throw std::invalid_argument("kernel: dimension must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("kernel: bandwidth must be positive and finite");
  KernelSpec spec;
  spec.family = KernelFamily::gaussian;
  spec.bandwidth = sigma;
  spec.dim = d;
  return spec;
}

KernelSpec KernelSpec::laplacian(Index d, double sigma) {
  KernelSpec spec = gaussian(d, sigma);
  spec.family = KernelFamily::laplacian;
  return spec;
}

KernelSpec KernelSpec::polynomial(Index d, int degree, double offset, double domain_radius) {
  if (d < 1) throw std::invalid_argument("kernel: dimension must be positive");
  if (degree < 1) throw std::invalid_argument("kernel: polynomial degree must be at least one");
  if (offset < 0.0 || !std::isfinite(offset))
    throw std::invalid_argument("kernel: polynomial offset must be nonnegative and finite");
  if (!(domain_radius > 0.0) || !std::isfinite(domain_radius))
    throw std::invalid_argument(
        "kernel: the polynomial family is unbounded on R^d; a positive "
        "domain radius must be declared");
  KernelSpec spec;
  spec.family = KernelFamily::polynomial;
  spec.degree = degree;
  spec.offset = offset;
  spec.domain_radius = domain_radius;
  spec.dim = d;
  return spec;
}

double KernelSpec::kappa_squared() const {
  switch (family) {
    case KernelFamily::gaussian:
    case KernelFamily::laplacian:
      return 1.0;
    case KernelFamily::polynomial:
      return std::pow(domain_radius * domain_radius + offset, degree);
  }
  throw std::logic_error("kernel: unknown family");
}

std::string family_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::laplacian: return "laplacian";
    case KernelFamily::polynomial: return "polynomial";
  }
  throw std::logic_error("kernel: unknown family");
}

KernelFamily family_from_name(const std::string& name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "laplacian") return KernelFamily::laplacian;
  if (name == "polynomial") return KernelFamily::polynomial;
  throw std::invalid_argument("kernel: unknown family '" + name + "'");
}

namespace detail {

// Entry-level evaluation on matrix rows with a fixed accumulation order, so
// parallel Gram assembly is bit-identical to the sequential one.
double eval_rows(const KernelSpec& spec, const Matrix& a, Index i, const Matrix& b, Index j) {
  const Index d = a.cols();
  switch (spec.family) {
    case KernelFamily::gaussian: {
      double s = 0.0;
      for (Index k = 0; k < d; ++k) {
        const double diff = a(i, k) - b(j, k);
        s += diff * diff;
      }
      return std::exp(-s / (2.0 * spec.bandwidth * spec.bandwidth));
    }
    case KernelFamily::laplacian: {
      double s = 0.0;
      for (Index k = 0; k < d; ++k) {
        const double diff = a(i, k) - b(j, k);
        s += diff * diff;
      }
      return std::exp(-std::sqrt(s) / spec.bandwidth);
    }
    case KernelFamily::polynomial: {
      double s = 0.0;
      for (Index k = 0; k < d; ++k) s += a(i, k) * b(j, k);
      return std::pow(s + spec.offset, spec.degree);
    }
  }
  throw std::logic_error("kernel: unknown family");
}

void check_domain(const KernelSpec& spec, const Matrix& pts) {
  if (spec.family != KernelFamily::polynomial) return;
  const double r2 = spec.domain_radius * spec.domain_radius;
  for (Index i = 0; i < pts.rows(); ++i) {
    if (pts.row(i).squaredNorm() > r2)
      throw std::invalid_argument("kernel: point " + std::to_string(i) +
                                  " lies outside the declared polynomial domain radius");
  }
}

}  // namespace detail

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y) {
  if (x.size() != spec.dim || y.size() != spec.dim)
    throw std::invalid_argument("kernel: point dimension mismatch");
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument("kernel: points must be finite");
  Matrix a = x.transpose();
  Matrix b = y.transpose();
  detail::check_domain(spec, a);
  detail::check_domain(spec, b);
  return detail::eval_rows(spec, a, 0, b, 0);
}

Matrix gram(const KernelSpec& spec, const Sample& s) {
  validate_sample(s, spec.dim);
  detail::check_domain(spec, s.points);
  const Index n = s.size();
  Matrix k(n, n);
  parallel_blocks(n, [&](std::int64_t begin, std::int64_t end) {
    for (Index i = begin; i < end; ++i)
      for (Index j = i; j < n; ++j) k(i, j) = detail::eval_rows(spec, s.points, i, s.points, j);
  });
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) k(i, j) = k(j, i);
  return k;
}

Matrix cross_gram(const KernelSpec& spec, const Sample& a, const Sample& b) {
  validate_sample(a, spec.dim);
  validate_sample(b, spec.dim);
  detail::check_domain(spec, a.points);
  detail::check_domain(spec, b.points);
  const Index n = a.size();
  const Index m = b.size();
  Matrix k(n, m);
  parallel_blocks(n, [&](std::int64_t begin, std::int64_t end) {
    for (Index i = begin; i < end; ++i)
      for (Index j = 0; j < m; ++j) k(i, j) = detail::eval_rows(spec, a.points, i, b.points, j);
  });
  return k;
}

}  // namespace rnd
