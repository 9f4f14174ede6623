#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stablekit/params.hpp"

namespace stablekit {

struct ProjectionGrid {
  std::vector<Eigen::Vector2d> directions;
  /// ECF arguments, in units of 1 / median|data| of the sample they are applied to.
  std::vector<double> ecf_points;

  /// 16 equally spaced angles in [0, pi); 10 geometric points over [0.1, 1].
  static ProjectionGrid standard();
};

void validate(const ProjectionGrid& grid);

struct NnlsProblem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

/// argmin ||Ax - b|| subject to x >= 0 (Lawson-Hanson active set).
Eigen::VectorXd nnls_solve(const NnlsProblem& problem);

struct SymmetricEcfEstimate {
  double alpha;
  double sigma;
};

/// Log-log regression of -log|ecf(u)| on u for zero-location data.
SymmetricEcfEstimate estimate_symmetric_ecf(std::span<const double> data,
                                            const ProjectionGrid& grid = ProjectionGrid::standard());

/// Discrete spectral measure on the m anchors of the unit circle from n x 2 data.
SpectralMeasure estimate_spectral_measure(const Eigen::MatrixXd& data, std::size_t m,
                                          const ProjectionGrid& grid = ProjectionGrid::standard());

}  // namespace stablekit
