#ifndef PHDIM_GEOMETRY_HPP
#define PHDIM_GEOMETRY_HPP

// Euclidean point clouds, their distance matrices, the minimum spanning
// tree, and the 0-dimensional Vietoris-Rips barcode read off from it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "phdim/errors.hpp"

namespace phdim {

/// n points in R^d, stored row-major. Every coordinate is finite.
class PointCloud {
 public:
  PointCloud() = default;

  PointCloud(std::size_t n, std::size_t d, std::vector<double> coords)
      : n_(n), d_(d), coords_(std::move(coords)) {
    if (n_ == 0 || d_ == 0) throw InvalidInput("point cloud needs n >= 1 and d >= 1");
    if (coords_.size() != n_ * d_)
      throw InvalidInput("point cloud storage has " + std::to_string(coords_.size()) +
                         " values, expected " + std::to_string(n_ * d_));
    for (std::size_t k = 0; k < coords_.size(); ++k) {
      if (!std::isfinite(coords_[k]))
        throw InvalidInput("non-finite coordinate at point " + std::to_string(k / d_) +
                           ", dimension " + std::to_string(k % d_));
    }
  }

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw InvalidInput("point cloud needs at least one point");
    const std::size_t d = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * d);
    for (const auto& r : rows) {
      if (r.size() != d) throw InvalidInput("ragged rows in point cloud");
      coords.insert(coords.end(), r.begin(), r.end());
    }
    return PointCloud(rows.size(), d, std::move(coords));
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {coords_.data() + i * d_, d_};
  }
  double operator()(std::size_t i, std::size_t j) const noexcept { return coords_[i * d_ + j]; }

  std::span<const double> data() const noexcept { return coords_; }

  /// The sub-cloud made of the given rows, in the given order.
  PointCloud select(std::span<const std::size_t> indices) const {
    std::vector<double> coords;
    coords.reserve(indices.size() * d_);
    for (std::size_t i : indices) {
      auto r = row(i);
      coords.insert(coords.end(), r.begin(), r.end());
    }
    return PointCloud(indices.size(), d_, std::move(coords));
  }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> coords_;
};

/// Euclidean distance with a fixed summation order; every distance in the
/// library goes through here so that repeated evaluations agree bitwise.
inline double euclidean(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return std::sqrt(s);
}

/// Thread count for internal loops: PHDIM_THREADS if set and positive,
/// otherwise the hardware concurrency.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("PHDIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Symmetric n x n matrix of pairwise distances with an exact zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }

  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) noexcept {
    entries_[i * n_ + j] = v;
    entries_[j * n_ + i] = v;
  }

  std::span<const double> row(std::size_t i) const noexcept {
    return {entries_.data() + i * n_, n_};
  }

  DistanceMatrix submatrix(std::span<const std::size_t> indices) const {
    DistanceMatrix out(indices.size());
    for (std::size_t a = 0; a < indices.size(); ++a)
      for (std::size_t b = a + 1; b < indices.size(); ++b)
        out.set(a, b, (*this)(indices[a], indices[b]));
    return out;
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// Every pairwise distance of the cloud. Rows are split across `threads`
/// workers (0 = default_thread_count()); each unordered pair is evaluated
/// exactly once, so the result does not depend on the thread count.
inline DistanceMatrix pairwise_distances(const PointCloud& cloud, unsigned threads = 0) {
  const std::size_t n = cloud.size();
  DistanceMatrix dist(n);
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 64)));

  auto fill_rows = [&](std::size_t stripe) {
    // Striping balances the triangular workload.
    for (std::size_t i = stripe; i < n; i += threads)
      for (std::size_t j = i + 1; j < n; ++j) dist.set(i, j, euclidean(cloud.row(i), cloud.row(j)));
  };

  if (threads <= 1) {
    threads = 1;
    fill_rows(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(fill_rows, t);
  }
  return dist;
}

struct MstEdge {
  std::size_t i = 0;  ///< smaller endpoint
  std::size_t j = 0;  ///< larger endpoint
  double length = 0.0;

  friend bool operator==(const MstEdge&, const MstEdge&) = default;
};

/// Strict total order on edges used for tie-breaking: (length, min index, max index).
inline bool edge_precedes(double la, std::size_t ia, std::size_t ja, double lb, std::size_t ib,
                          std::size_t jb) noexcept {
  return std::tie(la, ia, ja) < std::tie(lb, ib, jb);
}

struct MstResult {
  std::vector<MstEdge> edges;  ///< n - 1 edges in insertion order
  double total_length_alpha1 = 0.0;
};

/// Dense Prim over an implicit complete graph, O(n^2) time and O(n) extra
/// memory. `dist(a, b)` returns the edge weight between vertices a and b.
/// Ties are resolved by edge_precedes, which makes the tree unique.
template <class DistFn>
MstResult prim_mst(std::size_t n, DistFn&& dist) {
  MstResult out;
  if (n <= 1) return out;
  out.edges.reserve(n - 1);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<char> in_tree(n, 0);
  std::vector<double> best_len(n, kInf);
  std::vector<std::size_t> best_parent(n, kNone);

  auto key_lo = [&](std::size_t v) { return std::min(v, best_parent[v]); };
  auto key_hi = [&](std::size_t v) { return std::max(v, best_parent[v]); };

  std::size_t current = 0;
  in_tree[0] = 1;
  for (std::size_t added = 1; added < n; ++added) {
    for (std::size_t w = 0; w < n; ++w) {
      if (in_tree[w]) continue;
      const double len = dist(current, w);
      const std::size_t lo = std::min(current, w);
      const std::size_t hi = std::max(current, w);
      if (best_parent[w] == kNone || edge_precedes(len, lo, hi, best_len[w], key_lo(w), key_hi(w))) {
        best_len[w] = len;
        best_parent[w] = current;
      }
    }
    std::size_t next = kNone;
    for (std::size_t w = 0; w < n; ++w) {
      if (in_tree[w]) continue;
      if (next == kNone ||
          edge_precedes(best_len[w], key_lo(w), key_hi(w), best_len[next], key_lo(next), key_hi(next)))
        next = w;
    }
    in_tree[next] = 1;
    out.edges.push_back({key_lo(next), key_hi(next), best_len[next]});
    out.total_length_alpha1 += best_len[next];
    current = next;
  }
  return out;
}

inline MstResult compute_mst(const DistanceMatrix& dist) {
  if (dist.size() == 0) throw InvalidInput("minimum spanning tree needs at least one point");
  return prim_mst(dist.size(), [&](std::size_t a, std::size_t b) { return dist(a, b); });
}

/// Finite 0-dimensional Rips lifetimes (all births are 0, the infinite bar
/// is omitted), sorted ascending.
struct Barcode0 {
  std::vector<double> lifetimes;

  std::size_t size() const noexcept { return lifetimes.size(); }
  friend bool operator==(const Barcode0&, const Barcode0&) = default;
};

inline Barcode0 barcode_from_mst(const MstResult& mst) {
  Barcode0 bc;
  bc.lifetimes.reserve(mst.edges.size());
  for (const auto& e : mst.edges) bc.lifetimes.push_back(e.length);
  std::sort(bc.lifetimes.begin(), bc.lifetimes.end());
  return bc;
}

inline Barcode0 ph0_barcode(const DistanceMatrix& dist) { return barcode_from_mst(compute_mst(dist)); }

/// Computes distances on the fly, so memory stays O(n).
inline Barcode0 ph0_barcode(const PointCloud& cloud) {
  return barcode_from_mst(prim_mst(cloud.size(), [&](std::size_t a, std::size_t b) {
    return euclidean(cloud.row(a), cloud.row(b));
  }));
}

}  // namespace phdim

#endif  // PHDIM_GEOMETRY_HPP
