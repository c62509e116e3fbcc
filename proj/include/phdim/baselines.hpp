#ifndef PHDIM_BASELINES_HPP
#define PHDIM_BASELINES_HPP

// Reference intrinsic-dimension estimators: TwoNN, correlation dimension,
// Levina-Bickel MLE and explained-variance PCA.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "phdim/errors.hpp"
#include "phdim/geometry.hpp"
#include "phdim/line_fit.hpp"

namespace phdim {

enum class BaselineMethod { TWONN, CORRELATION, MLE, PCA };

inline std::string_view to_string(BaselineMethod m) {
  switch (m) {
    case BaselineMethod::TWONN: return "twonn";
    case BaselineMethod::CORRELATION: return "corr";
    case BaselineMethod::MLE: return "mle";
    case BaselineMethod::PCA: return "pca";
  }
  return "twonn";
}

struct BaselineEstimate {
  BaselineMethod method = BaselineMethod::TWONN;
  double estimate = 0.0;
  std::map<std::string, double> params;  ///< method-specific, e.g. {"k": 10}
};

namespace detail {

/// The cloud with exact duplicate rows removed (first occurrence kept).
inline PointCloud deduplicate(const PointCloud& cloud) {
  std::vector<std::size_t> order(cloud.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto row_less = [&](std::size_t a, std::size_t b) {
    auto ra = cloud.row(a), rb = cloud.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::stable_sort(order.begin(), order.end(), row_less);
  std::vector<char> keep(cloud.size(), 1);
  for (std::size_t t = 1; t < order.size(); ++t) {
    auto prev = cloud.row(order[t - 1]), cur = cloud.row(order[t]);
    if (std::equal(prev.begin(), prev.end(), cur.begin())) keep[order[t]] = 0;
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (keep[i]) kept.push_back(i);
  return cloud.select(kept);
}

/// Sorted distances from point i to its `k` nearest other points.
inline std::vector<double> nearest_distances(const DistanceMatrix& dist, std::size_t i, std::size_t k) {
  std::vector<double> row;
  row.reserve(dist.size() - 1);
  for (std::size_t j = 0; j < dist.size(); ++j)
    if (j != i) row.push_back(dist(i, j));
  k = std::min(k, row.size());
  std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
  row.resize(k);
  return row;
}

/// Linear-interpolated quantile of sorted data, q in [0, 1].
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

/// TwoNN in its maximum-likelihood form: n' / sum log(r2 / r1) over the
/// deduplicated points.
inline BaselineEstimate twonn_dim(const PointCloud& cloud) {
  if (cloud.size() < 3) throw InvalidInput("TwoNN needs at least 3 points");
  const PointCloud unique = detail::deduplicate(cloud);
  if (unique.size() < 3) throw DegenerateCloud("TwoNN: fewer than 3 distinct points");
  const DistanceMatrix dist = pairwise_distances(unique);
  double log_sum = 0.0;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    const auto nn = detail::nearest_distances(dist, i, 2);
    log_sum += std::log(nn[1] / nn[0]);
  }
  if (!(log_sum > 0.0)) throw DegenerateCloud("TwoNN: every point has equidistant neighbours");
  BaselineEstimate out;
  out.method = BaselineMethod::TWONN;
  out.estimate = static_cast<double>(unique.size()) / log_sum;
  out.params["n_used"] = static_cast<double>(unique.size());
  return out;
}

/// Grassberger-Procaccia correlation dimension: slope of log C(r) against
/// log r on a 20-point geometric grid spanning the 1st to 10th percentile
/// of pairwise distances.
inline BaselineEstimate correlation_dim(const PointCloud& cloud) {
  // Small enough to stay clear of the saturation bend of C(r), large enough
  // to hold thousands of pairs at n = 2000.
  constexpr double kLowerQuantile = 0.01;
  constexpr double kUpperQuantile = 0.10;
  constexpr int kGridPoints = 20;
  const std::size_t n = cloud.size();
  if (n < 10) throw InvalidInput("correlation dimension needs at least 10 points");

  std::vector<double> pair_d;
  pair_d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pair_d.push_back(euclidean(cloud.row(i), cloud.row(j)));
  std::sort(pair_d.begin(), pair_d.end());

  const double r_lo = detail::quantile_sorted(pair_d, kLowerQuantile);
  const double r_hi = detail::quantile_sorted(pair_d, kUpperQuantile);
  if (!(r_lo > 0.0) || !(r_hi > r_lo))
    throw FitDegenerate("correlation dimension: percentile window of distances is empty");

  const double pairs = static_cast<double>(pair_d.size());
  std::vector<double> xs, ys;
  for (int g = 0; g < kGridPoints; ++g) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(g) / (kGridPoints - 1));
    const auto below = std::lower_bound(pair_d.begin(), pair_d.end(), r) - pair_d.begin();
    const double c = static_cast<double>(below) / pairs;
    if (c > 0.0) {
      xs.push_back(std::log(r));
      ys.push_back(std::log(c));
    }
  }
  if (xs.size() < 2) throw FitDegenerate("correlation dimension: fewer than 2 radii with C(r) > 0");
  const LineFit fit = fit_line_ls(xs, ys);

  BaselineEstimate out;
  out.method = BaselineMethod::CORRELATION;
  out.estimate = fit.slope;
  out.params["r_min"] = r_lo;
  out.params["r_max"] = r_hi;
  out.params["grid_points"] = static_cast<double>(xs.size());
  return out;
}

/// Levina-Bickel maximum-likelihood estimate averaged over points, using
/// the k nearest neighbours. Points with a zero neighbour distance are
/// skipped.
inline BaselineEstimate mle_dim(const PointCloud& cloud, std::size_t k = 10) {
  if (k < 3) throw InvalidInput("MLE dimension needs k >= 3");
  if (cloud.size() <= k) throw InvalidInput("MLE dimension needs more than k points");
  const DistanceMatrix dist = pairwise_distances(cloud);
  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto t = detail::nearest_distances(dist, i, k);
    if (!(t[0] > 0.0)) continue;
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < k; ++j) s += std::log(t[k - 1] / t[j]);
    if (!(s > 0.0)) continue;
    acc += static_cast<double>(k - 1) / s;
    ++used;
  }
  if (used == 0) throw DegenerateCloud("MLE dimension: every point was skipped");
  BaselineEstimate out;
  out.method = BaselineMethod::MLE;
  out.estimate = acc / static_cast<double>(used);
  out.params["k"] = static_cast<double>(k);
  out.params["points_used"] = static_cast<double>(used);
  return out;
}

/// Smallest number of principal components whose cumulative explained
/// variance reaches the threshold. A cloud with zero total variance counts
/// as one-dimensional.
inline BaselineEstimate pca_dim(const PointCloud& cloud, double variance_threshold = 0.95) {
  if (cloud.size() < 2) throw InvalidInput("PCA dimension needs at least 2 points");
  if (!(variance_threshold > 0.0 && variance_threshold < 1.0))
    throw InvalidInput("PCA variance threshold must lie in (0, 1)");
  const auto n = static_cast<Eigen::Index>(cloud.size());
  const auto d = static_cast<Eigen::Index>(cloud.dim());
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = cloud(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  x.rowwise() -= x.colwise().mean();

  // The covariance and the Gram matrix share their nonzero spectrum; use
  // whichever is smaller.
  const Eigen::MatrixXd m = d <= n ? Eigen::MatrixXd(x.transpose() * x) : Eigen::MatrixXd(x * x.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  std::vector<double> ev(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
  for (auto& v : ev) v = std::max(v, 0.0);
  std::sort(ev.rbegin(), ev.rend());
  double total = 0.0;
  for (double v : ev) total += v;

  std::size_t comps = 1;
  if (total > 0.0) {
    double cum = 0.0;
    comps = ev.size();
    for (std::size_t i = 0; i < ev.size(); ++i) {
      cum += ev[i];
      if (cum / total >= variance_threshold) {
        comps = i + 1;
        break;
      }
    }
  }
  BaselineEstimate out;
  out.method = BaselineMethod::PCA;
  out.estimate = static_cast<double>(comps);
  out.params["variance_threshold"] = variance_threshold;
  return out;
}

}  // namespace phdim

#endif  // PHDIM_BASELINES_HPP
