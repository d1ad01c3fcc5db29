#pragma once

#include <string>

#include "rnd/types.hpp"

namespace rnd {

enum class KernelFamily { gaussian, laplacian, polynomial };

// Bounded symmetric positive-definite kernel on R^d.
//
//   gaussian    k(x, y) = exp(-|x - y|^2 / (2 sigma^2)),   kappa = 1
//   laplacian   k(x, y) = exp(-|x - y| / sigma),           kappa = 1
//   polynomial  k(x, y) = (x . y + offset)^degree
//
// The polynomial family is only bounded on a compact domain, so it is
// admitted only together with a declared radius R; points with |x| > R are
// rejected and kappa^2 = (R^2 + offset)^degree.
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  double bandwidth = 1.0;      // gaussian / laplacian
  int degree = 2;              // polynomial
  double offset = 0.0;         // polynomial
  double domain_radius = 0.0;  // polynomial
  Index dim = 1;

  static KernelSpec gaussian(Index d, double sigma = 1.0);
  static KernelSpec laplacian(Index d, double sigma = 1.0);
  static KernelSpec polynomial(Index d, int degree, double offset, double domain_radius);

  // Uniform bound on k(x, x) over the admissible domain.
  double kappa_squared() const;

  bool operator==(const KernelSpec&) const = default;
};

std::string family_name(KernelFamily family);
KernelFamily family_from_name(const std::string& name);

// Single kernel evaluation; validates dimensions, finiteness and (for the
// polynomial family) the domain bound.
double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& y);

// Gram matrix of a sample.  Only the upper triangle is computed; the lower
// is mirrored, so the result is exactly symmetric.
Matrix gram(const KernelSpec& spec, const Sample& s);

// Rectangular Gram block between two samples: cross_gram(a, b)(i, j) =
// k(a_i, b_j).
Matrix cross_gram(const KernelSpec& spec, const Sample& a, const Sample& b);

namespace detail {
// Unchecked entry-level evaluation between rows of two point matrices, used
// by the assemblers and evaluators after validating their inputs once.
double eval_rows(const KernelSpec& spec, const Matrix& a, Index i, const Matrix& b, Index j);
// Rejects points outside the declared polynomial domain (no-op otherwise).
void check_domain(const KernelSpec& spec, const Matrix& pts);
}  // namespace detail

}  // namespace rnd
