#ifndef PHDIM_ESTIMATOR_HPP
#define PHDIM_ESTIMATOR_HPP

// Persistent-homology dimension of a finite point set.
//
// For n = n_min, n_min + step, ..., <= K a uniform subsample W_n of the
// cloud is drawn, E_alpha(W_n) = sum |I|^alpha over its finite PH0 bars is
// recorded, and a line is fitted to (log n, log E). With slope m the
// estimate is alpha / (1 - m).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phdim/errors.hpp"
#include "phdim/geometry.hpp"
#include "phdim/line_fit.hpp"
#include "phdim/random.hpp"

namespace phdim {

/// Lifetimes shorter than this do not contribute to lifetime sums.
inline constexpr double kMinLifetime = 1e-12;

struct EstimatorConfig {
  double alpha = 1.0;
  std::size_t n_min = 100;
  std::size_t step_delta = 100;
  std::size_t repetitions_per_n = 1;
  Fitter fitter = Fitter::LS;
  std::uint64_t seed = 0;
  /// Largest sample size to use; 0 means the whole cloud.
  std::size_t n_max = 0;
  int ransac_iterations = 1000;

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be positive");
    if (n_min < 2) throw InvalidInput("n_min must be at least 2");
    if (step_delta < 1) throw InvalidInput("step must be at least 1");
    if (repetitions_per_n < 1) throw InvalidInput("repetitions per n must be at least 1");
    if (ransac_iterations < 1) throw InvalidInput("RANSAC iterations must be at least 1");
  }

  friend bool operator==(const EstimatorConfig&, const EstimatorConfig&) = default;
};

/// Default schedule for a cloud of `k` points: n_min = k / 15 and
/// step = k / 30, i.e. 29 sample sizes for k = 1500.
inline EstimatorConfig default_config_for(std::size_t k) {
  EstimatorConfig cfg;
  cfg.n_min = std::max<std::size_t>(2, k / 15);
  cfg.step_delta = std::max<std::size_t>(1, k / 30);
  return cfg;
}

struct SeriesEntry {
  std::size_t n = 0;
  double e_alpha = 0.0;

  friend bool operator==(const SeriesEntry&, const SeriesEntry&) = default;
};

struct LifetimeSumSeries {
  std::vector<SeriesEntry> entries;

  friend bool operator==(const LifetimeSumSeries&, const LifetimeSumSeries&) = default;
};

struct DimensionReport {
  double estimate = 0.0;
  EstimatorConfig config;
  LifetimeSumSeries series;
  LineFit fit;
  std::size_t n_points_total = 0;
  std::size_t ambient_dim = 0;

  friend bool operator==(const DimensionReport&, const DimensionReport&) = default;
};

/// Sum of lifetime^alpha over bars at least kMinLifetime long.
inline double lifetime_sum(const Barcode0& barcode, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
  double total = 0.0;
  bool any = false;
  for (double l : barcode.lifetimes) {
    if (l < kMinLifetime) continue;
    total += std::pow(l, alpha);
    any = true;
  }
  if (!any) throw DegenerateCloud("all PH0 lifetimes are zero (degenerate cloud)");
  return total;
}

/// The sample sizes n_min, n_min + step, ... capped at min(K, n_max).
inline std::vector<std::size_t> sample_sizes(const EstimatorConfig& cfg, std::size_t k) {
  const std::size_t cap = cfg.n_max == 0 ? k : std::min(k, cfg.n_max);
  std::vector<std::size_t> out;
  for (std::size_t n = cfg.n_min; n <= cap; n += cfg.step_delta) out.push_back(n);
  return out;
}

/// Fits the series and turns the slope into a dimension. This is the tail
/// of estimate_ph_dim and is exposed so that analytic series can be fed in
/// directly.
inline DimensionReport estimate_from_series(const LifetimeSumSeries& series, const EstimatorConfig& cfg,
                                            std::size_t n_points_total, std::size_t ambient_dim) {
  cfg.validate();
  if (series.entries.size() < 2) throw InvalidInput("need at least two series entries to fit a slope");
  std::vector<double> xs, ys;
  for (const auto& e : series.entries) {
    if (!(e.e_alpha > 0.0)) throw DegenerateCloud("lifetime sum must be positive");
    xs.push_back(std::log(static_cast<double>(e.n)));
    ys.push_back(std::log(e.e_alpha));
  }
  DimensionReport rep;
  rep.config = cfg;
  rep.series = series;
  rep.n_points_total = n_points_total;
  rep.ambient_dim = ambient_dim;
  rep.fit = fit_line(cfg.fitter, xs, ys, cfg.ransac_iterations, derive_seed(cfg.seed, {0x7261'6e73'6163ULL}));

  const double m = rep.fit.slope;
  if (!(m < 1.0)) throw SlopeOutOfRange("slope >= 1; increase K or decrease alpha");
  if (!(m > 0.0)) throw SlopeOutOfRange("slope <= 0; the lifetime sums do not grow with n");
  rep.estimate = cfg.alpha / (1.0 - m);
  return rep;
}

/// Barcodes of every subsample in the schedule, reusable across alphas.
struct SubsampleBarcodes {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<Barcode0>> barcodes;  ///< [size index][repetition]
  std::size_t n_points_total = 0;
  std::size_t ambient_dim = 0;
};

namespace detail {

/// Clouds up to this size get a precomputed distance matrix (<= 128 MiB).
inline constexpr std::size_t kDenseDistanceLimit = 4096;

}  // namespace detail

/// Draws the subsamples of the schedule and computes their PH0 barcodes.
/// Subsample (n, r) uses the stream derive_seed(seed, {n, r}), so each
/// entry is independent of the rest of the schedule.
inline SubsampleBarcodes collect_barcodes(const PointCloud& cloud, const EstimatorConfig& cfg) {
  cfg.validate();
  const std::size_t k = cloud.size();
  if (k < cfg.n_min + cfg.step_delta)
    throw InvalidInput("cloud has " + std::to_string(k) + " points; need at least n_min + step = " +
                       std::to_string(cfg.n_min + cfg.step_delta));
  SubsampleBarcodes out;
  out.sizes = sample_sizes(cfg, k);
  out.n_points_total = k;
  out.ambient_dim = cloud.dim();
  if (out.sizes.size() < 2) throw InvalidInput("schedule yields fewer than two sample sizes");

  std::optional<DistanceMatrix> full;
  if (k <= detail::kDenseDistanceLimit) full = pairwise_distances(cloud);

  for (std::size_t n : out.sizes) {
    auto& per_n = out.barcodes.emplace_back();
    for (std::size_t r = 0; r < cfg.repetitions_per_n; ++r) {
      Rng rng(derive_seed(cfg.seed, {n, r}));
      const auto idx = sample_without_replacement(k, n, rng);
      MstResult mst;
      if (full) {
        mst = prim_mst(n, [&](std::size_t a, std::size_t b) { return (*full)(idx[a], idx[b]); });
      } else {
        mst = prim_mst(n, [&](std::size_t a, std::size_t b) {
          return euclidean(cloud.row(idx[a]), cloud.row(idx[b]));
        });
      }
      per_n.push_back(barcode_from_mst(mst));
    }
  }
  return out;
}

/// Mean lifetime sum per sample size.
inline LifetimeSumSeries series_for_alpha(const SubsampleBarcodes& bars, double alpha) {
  LifetimeSumSeries series;
  for (std::size_t s = 0; s < bars.sizes.size(); ++s) {
    double acc = 0.0;
    for (const auto& bc : bars.barcodes[s]) acc += lifetime_sum(bc, alpha);
    series.entries.push_back({bars.sizes[s], acc / static_cast<double>(bars.barcodes[s].size())});
  }
  return series;
}

inline DimensionReport estimate_ph_dim(const PointCloud& cloud, const EstimatorConfig& cfg) {
  const auto bars = collect_barcodes(cloud, cfg);
  return estimate_from_series(series_for_alpha(bars, cfg.alpha), cfg, bars.n_points_total, bars.ambient_dim);
}

struct SweepPoint {
  double alpha = 0.0;
  std::optional<DimensionReport> report;
  std::string error;  ///< empty when `report` is set
};

/// Estimates at several alphas from one shared set of subsamples, so the
/// sweep isolates the effect of alpha. Estimation failures are recorded per
/// point instead of aborting the sweep.
inline std::vector<SweepPoint> sweep_alpha(const PointCloud& cloud, EstimatorConfig cfg,
                                           std::span<const double> alphas) {
  const auto bars = collect_barcodes(cloud, cfg);
  std::vector<SweepPoint> out;
  for (double a : alphas) {
    SweepPoint p;
    p.alpha = a;
    cfg.alpha = a;
    try {
      p.report = estimate_from_series(series_for_alpha(bars, a), cfg, bars.n_points_total, bars.ambient_dim);
    } catch (const SlopeOutOfRange& e) {
      p.error = e.what();
    } catch (const DegenerateCloud& e) {
      p.error = e.what();
    } catch (const FitDegenerate& e) {
      p.error = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace phdim

#endif  // PHDIM_ESTIMATOR_HPP
