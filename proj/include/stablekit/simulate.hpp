#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "stablekit/params.hpp"

namespace stablekit {

/// Seeded random stream. The engine is mt19937_64 seeded from both halves of
/// (seed, stream_id); uniforms, normals and exponentials are derived here, not
/// by <random> distributions, so sequences are identical across platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double normal();
  double exponential();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Chambers-Mallows-Stuck draws in the requested form.
std::vector<double> rstable(std::size_t n, const StableParams& params, RngStream& rng);

/// Draws of the positive stable mixing variable (Laplace transform exp(-s^a)).
std::vector<double> rstable_positive(std::size_t n, double alpha_half, RngStream& rng);

/// Inverse-cdf draws restricted to (a, b).
std::vector<double> rstable_truncated(std::size_t n, const StableParams& params, double a,
                                      double b, RngStream& rng);

/// n x d matrix of sqrt(2P) A N + mu with A A' = Sigma.
Eigen::MatrixXd rstable_elliptical(std::size_t n, const EllipticalParams& params,
                                   RngStream& rng);

/// n x d matrix of sum_j gamma_j^(1/alpha) V_j s_j + mu, V_j ~ S1(alpha, 1, 1, 0).
Eigen::MatrixXd rstable_spectral(std::size_t n, const SpectralMeasure& measure, RngStream& rng);

/// Cholesky factor of the symmetric part of `sigma`, retrying once with 1e-12 jitter.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& sigma);

}  // namespace stablekit
