#include "stablekit/spectral_fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "stablekit/errors.hpp"

namespace stablekit {

namespace {

constexpr double kPi = std::numbers::pi;

std::complex<double> ecf(std::span<const double> y, double u) {
  double c = 0.0, s = 0.0;
  for (double v : y) {
    c += std::cos(u * v);
    s += std::sin(u * v);
  }
  const double n = static_cast<double>(y.size());
  return {c / n, s / n};
}

double median_abs(std::span<const double> y) {
  std::vector<double> a(y.size());
  std::transform(y.begin(), y.end(), a.begin(), [](double v) { return std::abs(v); });
  const auto mid = a.begin() + static_cast<std::ptrdiff_t>(a.size() / 2);
  std::nth_element(a.begin(), mid, a.end());
  double m = *mid;
  if (!(m > 0.0)) {
    double s = 0.0;
    for (double v : a) s += v;
    m = s / static_cast<double>(a.size());
  }
  if (!(m > 0.0)) throw DegenerateEcf("all observations are zero");
  return m;
}

// ECF arguments in data units, rescaled by 10 once when the ECF is still ~1.
std::vector<double> ecf_arguments(std::span<const double> y, const ProjectionGrid& grid,
                                  std::vector<std::complex<double>>& phi) {
  const double scale = median_abs(y);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double f = (attempt == 0 ? 1.0 : 10.0) / scale;
    std::vector<double> u;
    phi.clear();
    bool flat = false;
    for (double p : grid.ecf_points) {
      u.push_back(p * f);
      phi.push_back(ecf(y, p * f));
      if (std::abs(phi.back()) >= 1.0 - 1e-10) flat = true;
    }
    if (!flat) return u;
  }
  throw DegenerateEcf("empirical characteristic function is indistinguishable from 1");
}

}  // namespace

ProjectionGrid ProjectionGrid::standard() {
  ProjectionGrid g;
  for (int k = 0; k < 16; ++k) {
    const double th = kPi * k / 16.0;
    g.directions.emplace_back(std::cos(th), std::sin(th));
  }
  for (int l = 0; l < 10; ++l) g.ecf_points.push_back(0.1 * std::pow(10.0, l / 9.0));
  return g;
}

void validate(const ProjectionGrid& grid) {
  if (grid.directions.empty()) throw DomainError("projection grid has no directions");
  if (grid.ecf_points.size() < 2) throw DomainError("projection grid needs at least two ECF points");
  for (double u : grid.ecf_points)
    if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("ECF points must be positive");
  for (std::size_t i = 0; i < grid.directions.size(); ++i) {
    if (std::abs(grid.directions[i].norm() - 1.0) > 1e-10)
      throw DomainError("projection directions must be unit vectors");
    for (std::size_t j = 0; j < i; ++j)
      if ((grid.directions[i] - grid.directions[j]).norm() < 1e-12)
        throw DomainError("projection directions must be distinct");
  }
}

Eigen::VectorXd nnls_solve(const NnlsProblem& pr) {
  const Eigen::MatrixXd& A = pr.A;
  const Eigen::VectorXd& b = pr.b;
  const Eigen::Index r = A.rows(), m = A.cols();
  if (r < 1 || m < 1) throw DimensionMismatch("NNLS needs a non-empty design matrix");
  if (b.size() != r) throw DimensionMismatch("NNLS right-hand side has the wrong length");
  if (!A.allFinite() || !b.allFinite()) throw DomainError("NNLS problem has non-finite entries");

  const double tol = 1e-12 * std::max(1.0, A.norm() * b.norm());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(static_cast<std::size_t>(m), false);
  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < m; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Eigen::MatrixXd Ap(r, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
    for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[static_cast<Eigen::Index>(k)];
    return z;
  };

  const int max_outer = static_cast<int>(3 * m) + 10;
  Eigen::VectorXd w = A.transpose() * (b - A * x);
  for (int outer = 0;; ++outer) {
    Eigen::Index jmax = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < m; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w[j] > wmax) wmax = w[j], jmax = j;
    if (jmax < 0) break;
    if (outer >= max_outer) throw MaxIterations("NNLS active-set iterations exhausted");
    passive[static_cast<std::size_t>(jmax)] = true;
    for (;;) {
      const Eigen::VectorXd z = solve_passive();
      double step = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
          feasible = false;
          const double d = x[j] - z[j];
          if (d > 0.0) step = std::min(step, x[j] / d);
        }
      }
      if (feasible) {
        x = z;
        break;
      }
      x += step * (z - x);
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x[j] <= 1e-15 * (1.0 + x.cwiseAbs().maxCoeff())) {
          passive[static_cast<std::size_t>(j)] = false;
          x[j] = 0.0;
        }
      }
    }
    w = A.transpose() * (b - A * x);
  }
  return x.cwiseMax(0.0);
}

SymmetricEcfEstimate estimate_symmetric_ecf(std::span<const double> data,
                                            const ProjectionGrid& grid) {
  validate(grid);
  if (data.size() < 50) throw InvalidInput("ECF estimation needs at least 50 observations");
  for (double v : data)
    if (!std::isfinite(v)) throw InvalidInput("data contains non-finite values");
  std::vector<std::complex<double>> phi;
  const std::vector<double> u = ecf_arguments(data, grid, phi);
  std::vector<double> xs, ys;
  for (std::size_t l = 0; l < u.size(); ++l) {
    const double a = std::abs(phi[l]);
    if (!(a > 1e-12)) continue;
    xs.push_back(std::log(u[l]));
    ys.push_back(std::log(-std::log(a)));
  }
  if (xs.size() < 2) throw DegenerateEcf("too few usable ECF points");
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t l = 0; l < xs.size(); ++l) mx += xs[l] / k, my += ys[l] / k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t l = 0; l < xs.size(); ++l) {
    sxy += (xs[l] - mx) * (ys[l] - my);
    sxx += (xs[l] - mx) * (xs[l] - mx);
  }
  const double slope = sxy / sxx;
  const double alpha = std::clamp(slope, 1e-3, 2.0);
  const double intercept = my - slope * mx;
  return {alpha, std::exp(intercept / alpha)};
}

SpectralMeasure estimate_spectral_measure(const Eigen::MatrixXd& data, std::size_t m,
                                          const ProjectionGrid& grid) {
  validate(grid);
  if (data.cols() != 2) throw DimensionMismatch("spectral estimation needs n x 2 data");
  if (data.rows() < 200) throw InvalidInput("spectral estimation needs at least 200 observations");
  if (m < 2) throw DomainError("at least two anchors are required");
  if (!data.allFinite()) throw InvalidInput("data contains non-finite values");

  const std::size_t K = grid.directions.size();
  std::vector<std::vector<double>> proj(K);
  std::vector<double> alphas;
  for (std::size_t k = 0; k < K; ++k) {
    const Eigen::VectorXd p = data * grid.directions[k];
    proj[k].assign(p.data(), p.data() + p.size());
    alphas.push_back(estimate_symmetric_ecf(proj[k], grid).alpha);
  }
  std::sort(alphas.begin(), alphas.end());
  const double alpha = K % 2 ? alphas[K / 2] : 0.5 * (alphas[K / 2 - 1] + alphas[K / 2]);
  if (std::abs(alpha - 1.0) < 1e-9)
    throw UnsupportedAlpha("spectral estimation needs alpha != 1");
  const double tn = std::tan(kPi * alpha / 2.0);

  // For u > 0: log ecf(u t) = -u^a sum_j g_j |<t,s_j>|^a (1 - i sgn<t,s_j> tan(pi a/2)).
  // Moduli give one row per direction, phases a second one (needed to split
  // antipodal anchors).
  const auto anchors = circle_anchors(m);
  const Eigen::Index rows = static_cast<Eigen::Index>(2 * K);
  Eigen::MatrixXd A(rows, static_cast<Eigen::Index>(m));
  Eigen::VectorXd b(rows);
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<std::complex<double>> phi;
    const std::vector<double> u = ecf_arguments(proj[k], grid, phi);
    double num_s = 0.0, num_p = 0.0, den = 0.0;
    for (std::size_t l = 0; l < u.size(); ++l) {
      const double ua = std::pow(u[l], alpha);
      const double a = std::abs(phi[l]);
      if (!(a > 1e-12)) continue;
      num_s += -std::log(a) * ua;
      num_p += std::arg(phi[l]) * ua;
      den += ua * ua;
    }
    if (!(den > 0.0)) throw DegenerateEcf("too few usable ECF points");
    const auto kk = static_cast<Eigen::Index>(k);
    b[2 * kk] = num_s / den;
    b[2 * kk + 1] = num_p / den;
    for (std::size_t j = 0; j < m; ++j) {
      const double ip = grid.directions[k].dot(Eigen::Vector2d(anchors[j]));
      const double w = std::pow(std::abs(ip), alpha);
      const auto jj = static_cast<Eigen::Index>(j);
      A(2 * kk, jj) = w;
      A(2 * kk + 1, jj) = w * (ip > 0.0 ? 1.0 : (ip < 0.0 ? -1.0 : 0.0)) * tn;
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  if (!(smin > 0.0) || sv[0] / smin > 1e12)
    throw IllConditioned("projection design matrix is ill-conditioned");
  const Eigen::VectorXd gamma = nnls_solve({A, b});

  SpectralMeasure out;
  out.alpha = alpha;
  out.points = anchors;
  out.masses.assign(gamma.data(), gamma.data() + gamma.size());
  out.mu = Eigen::VectorXd::Zero(2);
  return out;
}

}  // namespace stablekit
