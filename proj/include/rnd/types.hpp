#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace rnd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class SampleLabel { p, q };

// A finite sample of points in R^d, one point per row, tagged with the
// measure it was drawn from.
struct Sample {
  Matrix points;
  SampleLabel label = SampleLabel::p;

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
};

// Throws std::invalid_argument unless the sample is non-empty, has the
// expected dimension (when expected_dim >= 0) and every entry is finite.
void validate_sample(const Sample& s, Index expected_dim = -1);

}  // namespace rnd
