#pragma once

#include <cstdint>

#include "rnd/types.hpp"

namespace rnd {

// Shifted symmetric positive definite system (alpha I + A) x = b.  A is held
// exactly symmetric by construction (Gram matrices are mirrored).
struct SpdSystem {
  Matrix a;
  double alpha = 0.0;
};

// Cholesky factor of (alpha I + A).  The factorization is an unblocked
// lower-triangular Cholesky without pivoting; a non-positive pivot raises an
// error naming its index.  `flops` carries the nominal operation count:
// n^3/3 for the factorization plus n^2 per right-hand side solved.
class SpdFactor {
 public:
  SpdFactor(const Matrix& a, double alpha);

  Index n() const { return lower_.rows(); }
  std::uint64_t flops() const { return flops_; }

  // Forward/backward substitution; multi-column solves are performed
  // column by column, so they agree exactly with repeated single solves.
  Vector solve(const Eigen::Ref<const Vector>& b) const;
  Matrix solve_matrix(const Matrix& b) const;

 private:
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor lower_;
  RowMajor upper_;  // lower_ transposed, kept for contiguous back substitution
  mutable std::uint64_t flops_ = 0;
};

// One-shot solve; adds the factorization + substitution flop count to
// *flops when provided.
Vector solve_spd(const SpdSystem& sys, const Eigen::Ref<const Vector>& b,
                 std::uint64_t* flops = nullptr);
Matrix solve_spd_matrix(const SpdSystem& sys, const Matrix& b, std::uint64_t* flops = nullptr);

struct EigenDecomposition {
  Vector eigenvalues;   // sorted descending
  Matrix eigenvectors;  // orthonormal columns in matching order
  std::uint64_t flops = 0;  // nominal 9 n^3
};

// Full symmetric eigendecomposition.  Inputs are checked for symmetry and
// for the size cap (tridiagonalization beyond the cap is not worth its
// memory here).
EigenDecomposition eigh(const Matrix& a, Index size_cap = 5000);

// Gauss-Jordan inversion with partial pivoting.  Deliberately independent
// of the Cholesky path: it is the brute-force oracle the other routes are
// checked against.  Capped at n <= 200.
Matrix brute_inverse(const Matrix& a);

}  // namespace rnd
