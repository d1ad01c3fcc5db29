#include "rnd/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rnd {

namespace {

void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  if (a.rows() < 1) throw std::invalid_argument(std::string(who) + ": matrix must be non-empty");
  if (!a.allFinite()) throw std::invalid_argument(std::string(who) + ": entries must be finite");
}

}  // namespace

SpdFactor::SpdFactor(const Matrix& a, double alpha) {
  require_square(a, "solve_spd");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("solve_spd: shift alpha must be nonnegative and finite");
  const Index n = a.rows();
  lower_.setZero(n, n);
  for (Index j = 0; j < n; ++j) {
    double diag = a(j, j) + alpha - lower_.row(j).head(j).squaredNorm();
    if (!(diag > 0.0) || !std::isfinite(diag))
      throw std::runtime_error("solve_spd: non-positive pivot at index " + std::to_string(j) +
                               " (matrix not positive definite beyond tolerance)");
    const double ljj = std::sqrt(diag);
    lower_(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i)
      lower_(i, j) = (a(i, j) - lower_.row(i).head(j).dot(lower_.row(j).head(j))) / ljj;
  }
  upper_ = lower_.transpose();
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  flops_ = un * un * un / 3;
}

Vector SpdFactor::solve(const Eigen::Ref<const Vector>& b) const {
  const Index n = lower_.rows();
  if (b.size() != n) throw std::invalid_argument("solve_spd: right-hand side size mismatch");
  Vector y(n);
  for (Index i = 0; i < n; ++i)
    y(i) = (b(i) - lower_.row(i).head(i).dot(y.head(i))) / lower_(i, i);
  Vector x(n);
  for (Index i = n - 1; i >= 0; --i)
    x(i) = (y(i) - upper_.row(i).tail(n - 1 - i).dot(x.tail(n - 1 - i))) / upper_(i, i);
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  flops_ += un * un;
  return x;
}

Matrix SpdFactor::solve_matrix(const Matrix& b) const {
  if (b.rows() != lower_.rows())
    throw std::invalid_argument("solve_spd: right-hand side size mismatch");
  Matrix x(b.rows(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) x.col(j) = solve(b.col(j));
  return x;
}

Vector solve_spd(const SpdSystem& sys, const Eigen::Ref<const Vector>& b, std::uint64_t* flops) {
  SpdFactor factor(sys.a, sys.alpha);
  Vector x = factor.solve(b);
  if (flops) *flops += factor.flops();
  return x;
}

Matrix solve_spd_matrix(const SpdSystem& sys, const Matrix& b, std::uint64_t* flops) {
  SpdFactor factor(sys.a, sys.alpha);
  Matrix x = factor.solve_matrix(b);
  if (flops) *flops += factor.flops();
  return x;
}

EigenDecomposition eigh(const Matrix& a, Index size_cap) {
  require_square(a, "eigh");
  const Index n = a.rows();
  if (n > size_cap)
    throw std::invalid_argument("eigh: size " + std::to_string(n) + " exceeds the cap " +
                                std::to_string(size_cap));
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale)
    throw std::invalid_argument("eigh: matrix is not symmetric (max asymmetry " +
                                std::to_string(asym) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigh: iteration failed to converge within the solver budget of " +
                             std::to_string(30 * n) + " sweeps");
  EigenDecomposition dec;
  dec.eigenvalues = solver.eigenvalues().reverse();
  dec.eigenvectors = solver.eigenvectors().rowwise().reverse();
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  dec.flops = 9 * un * un * un;
  return dec;
}

Matrix brute_inverse(const Matrix& a) {
  require_square(a, "brute_inverse");
  const Index n = a.rows();
  if (n > 200) throw std::invalid_argument("brute_inverse: oracle is capped at n <= 200");
  const double tol = 1e-14 * std::max(1.0, a.cwiseAbs().maxCoeff());
  Matrix work = a;
  Matrix inv = Matrix::Identity(n, n);
  for (Index col = 0; col < n; ++col) {
    Index pivot = col;
    for (Index i = col + 1; i < n; ++i)
      if (std::abs(work(i, col)) > std::abs(work(pivot, col))) pivot = i;
    if (std::abs(work(pivot, col)) <= tol)
      throw std::runtime_error("brute_inverse: matrix is singular within pivot tolerance");
    if (pivot != col) {
      work.row(pivot).swap(work.row(col));
      inv.row(pivot).swap(inv.row(col));
    }
    const double diag = work(col, col);
    work.row(col) /= diag;
    inv.row(col) /= diag;
    for (Index i = 0; i < n; ++i) {
      if (i == col) continue;
      const double factor = work(i, col);
      if (factor == 0.0) continue;
      work.row(i) -= factor * work.row(col);
      inv.row(i) -= factor * inv.row(col);
    }
  }
  return inv;
}

}  // namespace rnd
