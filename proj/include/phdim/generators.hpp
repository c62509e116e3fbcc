#ifndef PHDIM_GENERATORS_HPP
#define PHDIM_GENERATORS_HPP

// Seeded point clouds with a known intrinsic dimension: beta-stable Levy
// trajectories (dimension beta), round spheres S^k and cubes [0,1]^k.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "phdim/errors.hpp"
#include "phdim/geometry.hpp"
#include "phdim/random.hpp"

namespace phdim {

/// One standard stable variate S(beta, skew; scale 1, location 0) in the
/// Chambers-Mallows-Stuck construction. Characteristic function
/// exp(-|t|^beta (1 - i skew sign(t) tan(pi beta / 2))) for beta != 1.
inline double stable_variate(double beta, double skew, Rng& rng) {
  constexpr double pi = std::numbers::pi;
  const double v = pi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  if (beta == 1.0) {
    const double a = pi / 2 + skew * v;
    return (2.0 / pi) * (a * std::tan(v) - skew * std::log((pi / 2) * w * std::cos(v) / a));
  }
  const double t = skew * std::tan(pi * beta / 2);
  const double b = std::atan(t) / beta;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * beta));
  const double bv = beta * (v + b);
  return s * std::sin(bv) / std::pow(std::cos(v), 1.0 / beta) *
         std::pow(std::cos(v - bv) / w, (1.0 - beta) / beta);
}

inline std::vector<double> sample_stable_1d(double beta, double skew, std::size_t n, std::uint64_t seed) {
  if (!(beta > 0.0 && beta <= 2.0)) throw InvalidInput("stable index must lie in (0, 2]");
  if (!(skew >= -1.0 && skew <= 1.0)) throw InvalidInput("skewness must lie in [-1, 1]");
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = stable_variate(beta, skew, rng);
  return out;
}

enum class LevyMode { ISOTROPIC, COORDINATE };

enum class Generator { LEVY, SPHERE, CUBE };

inline std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::LEVY: return "levy";
    case Generator::SPHERE: return "sphere";
    case Generator::CUBE: return "cube";
  }
  return "levy";
}

inline std::string_view to_string(LevyMode m) { return m == LevyMode::ISOTROPIC ? "iso" : "coord"; }

struct LevyConfig {
  std::size_t ambient_dim = 128;
  std::size_t n_steps = 1500;
  double beta = 1.5;
  LevyMode mode = LevyMode::ISOTROPIC;
  std::uint64_t seed = 0;

  void validate() const {
    if (ambient_dim < 2) throw InvalidInput("Levy ambient dimension must be >= 2");
    if (n_steps < 2) throw InvalidInput("Levy process needs at least 2 steps");
    if (!(beta > 0.0 && beta <= 2.0)) throw InvalidInput("tail index beta must lie in (0, 2]");
  }
};

struct GroundTruthCloud {
  PointCloud cloud;
  double true_dim = 0.0;
  Generator generator = Generator::LEVY;
  // Snapshot of the generating parameters.
  std::size_t intrinsic_dim = 0;  ///< k for sphere/cube, 0 for Levy
  std::size_t ambient_dim = 0;
  std::size_t n = 0;
  double beta = 0.0;  ///< Levy only
  LevyMode mode = LevyMode::ISOTROPIC;
  std::uint64_t seed = 0;
};

/// Scale of the totally skewed (beta/2)-stable subordinator A for which
/// sqrt(2 A) Z, Z ~ N(0, I), has characteristic function exp(-|w|^beta).
inline double subordinator_scale(double beta) {
  return std::pow(std::cos(std::numbers::pi * beta / 4.0), 2.0 / beta);
}

/// Trajectory of a beta-stable Levy process on [0, 1] sampled at
/// t = 1/n, 2/n, ..., 1 (so row 0 is the first increment).
///
/// ISOTROPIC increments are sub-Gaussian, dt^{1/beta} sqrt(2 A) Z; at
/// beta = 2 the subordinator is the constant 1 and the path is Brownian
/// with per-coordinate increment variance 2 dt. COORDINATE increments are
/// d independent symmetric stable variates scaled by dt^{1/beta}.
inline GroundTruthCloud gen_levy(const LevyConfig& cfg) {
  cfg.validate();
  const std::size_t d = cfg.ambient_dim;
  const std::size_t n = cfg.n_steps;
  const double dt_scale = std::pow(1.0 / static_cast<double>(n), 1.0 / cfg.beta);
  const double sub_scale = subordinator_scale(cfg.beta);
  Rng rng(cfg.seed);

  std::vector<double> coords(n * d);
  std::vector<double> pos(d, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    if (cfg.mode == LevyMode::ISOTROPIC) {
      double radial = std::sqrt(2.0);
      if (cfg.beta < 2.0) radial *= std::sqrt(sub_scale * stable_variate(cfg.beta / 2.0, 1.0, rng));
      for (std::size_t j = 0; j < d; ++j) pos[j] += dt_scale * radial * rng.normal();
    } else {
      for (std::size_t j = 0; j < d; ++j) pos[j] += dt_scale * stable_variate(cfg.beta, 0.0, rng);
    }
    std::copy(pos.begin(), pos.end(), coords.begin() + static_cast<std::ptrdiff_t>(t * d));
  }

  GroundTruthCloud out{PointCloud(n, d, std::move(coords))};
  out.true_dim = cfg.beta;
  out.generator = Generator::LEVY;
  out.ambient_dim = d;
  out.n = n;
  out.beta = cfg.beta;
  out.mode = cfg.mode;
  out.seed = cfg.seed;
  return out;
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
inline Eigen::MatrixXd random_orthogonal(std::size_t dim, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < m; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

namespace detail {

/// Zero-pads k-dimensional rows to D coordinates and applies a seeded
/// rotation of R^D. Rows are left untouched when k == D.
inline PointCloud embed(const std::vector<double>& rows, std::size_t n, std::size_t k, std::size_t big_d,
                        Rng& rng) {
  if (k == big_d) return PointCloud(n, k, rows);
  const Eigen::MatrixXd rot = random_orthogonal(big_d, rng);
  std::vector<double> coords(n * big_d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < big_d; ++a) {
      double s = 0.0;
      for (std::size_t b = 0; b < k; ++b)
        s += rot(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * rows[i * k + b];
      coords[i * big_d + a] = s;
    }
  }
  return PointCloud(n, big_d, std::move(coords));
}

}  // namespace detail

/// n uniform points on the unit sphere S^k in R^D (D >= k + 1).
inline GroundTruthCloud gen_sphere(std::size_t k, std::size_t ambient_dim, std::size_t n, std::uint64_t seed) {
  if (k < 1) throw InvalidInput("sphere dimension must be >= 1");
  if (ambient_dim < k + 1) throw InvalidInput("sphere S^k needs ambient dimension >= k + 1");
  if (n < 1) throw InvalidInput("need at least one point");
  Rng rng(seed);
  const std::size_t m = k + 1;
  std::vector<double> rows(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    double norm2;
    do {
      norm2 = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        rows[i * m + j] = rng.normal();
        norm2 += rows[i * m + j] * rows[i * m + j];
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t j = 0; j < m; ++j) rows[i * m + j] *= inv;
  }
  GroundTruthCloud out{detail::embed(rows, n, m, ambient_dim, rng)};
  out.true_dim = static_cast<double>(k);
  out.generator = Generator::SPHERE;
  out.intrinsic_dim = k;
  out.ambient_dim = ambient_dim;
  out.n = n;
  out.seed = seed;
  return out;
}

/// n uniform points in [0,1]^k, embedded in R^D (D >= k).
inline GroundTruthCloud gen_cube(std::size_t k, std::size_t ambient_dim, std::size_t n, std::uint64_t seed) {
  if (k < 1) throw InvalidInput("cube dimension must be >= 1");
  if (ambient_dim < k) throw InvalidInput("cube [0,1]^k needs ambient dimension >= k");
  if (n < 1) throw InvalidInput("need at least one point");
  Rng rng(seed);
  std::vector<double> rows(n * k);
  for (auto& x : rows) x = rng.uniform();
  GroundTruthCloud out{detail::embed(rows, n, k, ambient_dim, rng)};
  out.true_dim = static_cast<double>(k);
  out.generator = Generator::CUBE;
  out.intrinsic_dim = k;
  out.ambient_dim = ambient_dim;
  out.n = n;
  out.seed = seed;
  return out;
}

}  // namespace phdim

#endif  // PHDIM_GENERATORS_HPP
