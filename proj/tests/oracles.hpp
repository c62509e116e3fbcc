#ifndef PHDIM_TESTS_ORACLES_HPP
#define PHDIM_TESTS_ORACLES_HPP

// Independent reference computations for the test suites. Nothing here
// calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "phdim/geometry.hpp"
#include "phdim/random.hpp"

namespace phdim::oracle {

/// Plain double loop over all ordered pairs.
inline std::vector<std::vector<double>> naive_distances(const PointCloud& c) {
  std::vector<std::vector<double>> d(c.size(), std::vector<double>(c.size(), 0.0));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < c.dim(); ++k) s += (c(i, k) - c(j, k)) * (c(i, k) - c(j, k));
      d[i][j] = std::sqrt(s);
    }
  return d;
}

/// Minimum total length over every labelled spanning tree of K_n,
/// enumerated through Pruefer sequences (n^(n-2) trees).
inline double exhaustive_min_spanning_length(const std::vector<std::vector<double>>& d) {
  const std::size_t n = d.size();
  if (n <= 1) return 0.0;
  if (n == 2) return d[0][1];
  const std::size_t len = n - 2;
  std::vector<std::size_t> seq(len, 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> degree(n);
  for (;;) {
    std::fill(degree.begin(), degree.end(), 1);
    for (std::size_t v : seq) ++degree[v];
    double total = 0.0;
    for (std::size_t v : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      total += d[leaf][v];
      --degree[leaf];
      --degree[v];
    }
    std::size_t u = n, w = n;
    for (std::size_t x = 0; x < n; ++x)
      if (degree[x] == 1) (u == n ? u : w) = x;
    total += d[u][w];
    best = std::min(best, total);

    std::size_t pos = 0;
    while (pos < len && ++seq[pos] == n) seq[pos++] = 0;
    if (pos == len) break;
  }
  return best;
}

/// PH0 by a union-find sweep over all edges in increasing length: every
/// merge of two components kills one bar at the edge's length.
inline std::vector<double> union_find_ph0(const std::vector<std::vector<double>>& d) {
  const std::size_t n = d.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(d[i][j], i, j);
  std::sort(edges.begin(), edges.end());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<double> deaths;
  for (const auto& [len, i, j] : edges) {
    const std::size_t a = find(i), b = find(j);
    if (a == b) continue;
    parent[std::max(a, b)] = std::min(a, b);
    deaths.push_back(len);
  }
  std::sort(deaths.begin(), deaths.end());
  return deaths;
}

/// Kruskal with the (length, min index, max index) order; returns the edge
/// list sorted by that order.
inline std::vector<MstEdge> kruskal(const std::vector<std::vector<double>>& d) {
  const std::size_t n = d.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(d[i][j], i, j);
  std::sort(edges.begin(), edges.end());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<MstEdge> out;
  for (const auto& [len, i, j] : edges) {
    const std::size_t a = find(i), b = find(j);
    if (a == b) continue;
    parent[a] = b;
    out.push_back({i, j, len});
  }
  return out;
}

/// One-sample Kolmogorov-Smirnov statistic.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    worst = std::max({worst, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return worst;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return worst;
}

using BigFloat = boost::multiprecision::cpp_bin_float_50;

/// The generalization bound evaluated in 50-digit arithmetic.
inline BigFloat bound_big(BigFloat b, BigFloat l, BigFloat n, BigFloat m, BigFloat gamma, BigFloat dim) {
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  const BigFloat lg = log(n * l * l);
  return 2 * b * sqrt((dim + 1) * lg * lg / n + log(7 * m / gamma) / n);
}

/// Seeded uniform cloud in [lo, hi)^d.
inline PointCloud random_cloud(std::size_t n, std::size_t d, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  std::vector<double> coords(n * d);
  for (auto& x : coords) x = lo + (hi - lo) * rng.uniform();
  return PointCloud(n, d, std::move(coords));
}

}  // namespace phdim::oracle

#endif  // PHDIM_TESTS_ORACLES_HPP
