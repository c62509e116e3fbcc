#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "phdim/estimator.hpp"
#include "phdim/generators.hpp"

using namespace phdim;

namespace {

LifetimeSumSeries power_law_series(double exponent, double noise = 0.0, std::uint64_t seed = 0) {
  Rng rng(seed);
  LifetimeSumSeries s;
  for (std::size_t n = 100; n <= 1500; n += 100)
    s.entries.push_back({n, 3.0 * std::pow(static_cast<double>(n), exponent) * std::exp(noise * rng.normal())});
  return s;
}

}  // namespace

TEST(LifetimeSum, SmallCases) {
  const Barcode0 bc{{1.0, 2.0}};
  EXPECT_DOUBLE_EQ(lifetime_sum(bc, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(lifetime_sum(bc, 2.0), 5.0);
}

TEST(LifetimeSum, EqualsMstTotalAtAlphaOne) {
  const auto cloud = oracle::random_cloud(50, 3, 8);
  const auto mst = compute_mst(pairwise_distances(cloud));
  EXPECT_NEAR(lifetime_sum(ph0_barcode(cloud), 1.0), mst.total_length_alpha1, 1e-9);
}

TEST(LifetimeSum, SkipsVanishingBarsAndRejectsAllZero) {
  EXPECT_DOUBLE_EQ(lifetime_sum(Barcode0{{0.0, 1e-13, 2.0}}, 1.0), 2.0);
  EXPECT_THROW(lifetime_sum(Barcode0{{0.0, 0.0}}, 1.0), DegenerateCloud);
  EXPECT_THROW(lifetime_sum(Barcode0{{1.0}}, 0.0), InvalidInput);
}

TEST(EstimateFromSeries, ExactPowerLawInverts) {
  // E(n) = n^(1 - alpha / d*) with d* = 2, alpha = 1.
  EstimatorConfig cfg;
  const auto rep = estimate_from_series(power_law_series(0.5), cfg, 1500, 2);
  EXPECT_NEAR(rep.fit.slope, 0.5, 1e-12);
  EXPECT_NEAR(rep.estimate, 2.0, 1e-12);
  EXPECT_NEAR(rep.estimate, cfg.alpha / (1.0 - rep.fit.slope), 1e-15);
}

TEST(EstimateFromSeries, SlopeOutsideUnitIntervalIsAnError) {
  EstimatorConfig cfg;
  EXPECT_THROW(estimate_from_series(power_law_series(1.2), cfg, 1500, 2), SlopeOutOfRange);
  EXPECT_THROW(estimate_from_series(power_law_series(1.0), cfg, 1500, 2), SlopeOutOfRange);
  EXPECT_THROW(estimate_from_series(power_law_series(-0.3), cfg, 1500, 2), SlopeOutOfRange);
  try {
    estimate_from_series(power_law_series(1.2), cfg, 1500, 2);
  } catch (const SlopeOutOfRange& e) {
    EXPECT_STREQ(e.what(), "slope >= 1; increase K or decrease alpha");
  }
}

TEST(EstimateFromSeries, FittersAgreeOnCleanSeries) {
  const auto series = power_law_series(0.4, 0.002, 5);
  std::vector<double> est;
  for (auto f : {Fitter::LS, Fitter::RANSAC, Fitter::HUBER, Fitter::TUKEY}) {
    EstimatorConfig cfg;
    cfg.fitter = f;
    est.push_back(estimate_from_series(series, cfg, 1500, 3).estimate);
  }
  for (double a : est)
    for (double b : est) EXPECT_LT(std::abs(a - b), 0.05);
  EXPECT_NEAR(est[0], 1.0 / 0.6, 0.05);
}

TEST(EstimatePhDim, UnitSquare) {
  const auto cloud = gen_cube(2, 2, 2000, 31).cloud;
  EstimatorConfig cfg;
  cfg.n_min = 100;
  cfg.step_delta = 100;
  cfg.seed = 4;
  const auto rep = estimate_ph_dim(cloud, cfg);
  EXPECT_NEAR(rep.estimate, 2.0, 0.5);
  EXPECT_EQ(rep.series.entries.size(), 20u);
  EXPECT_EQ(rep.n_points_total, 2000u);
  EXPECT_EQ(rep.ambient_dim, 2u);
  EXPECT_GT(rep.fit.slope, 0.0);
  EXPECT_LT(rep.fit.slope, 1.0);
}

TEST(EstimatePhDim, LevyTrajectory) {
  LevyConfig lc;
  lc.beta = 1.5;
  lc.seed = 17;
  const auto cloud = gen_levy(lc).cloud;
  auto cfg = default_config_for(cloud.size());
  EXPECT_NEAR(estimate_ph_dim(cloud, cfg).estimate, 1.5, 0.3);
}

TEST(EstimatePhDim, NeedsTwoSampleSizes) {
  const auto cloud = oracle::random_cloud(150, 2, 1);
  EstimatorConfig cfg;  // 100 + 100 > 150
  EXPECT_THROW(estimate_ph_dim(cloud, cfg), InvalidInput);
  cfg.n_min = 1;
  EXPECT_THROW(estimate_ph_dim(cloud, cfg), InvalidInput);
}

TEST(EstimatePhDim, DegenerateCloudPropagates) {
  const PointCloud cloud(300, 2, std::vector<double>(600, 1.0));
  EstimatorConfig cfg;
  EXPECT_THROW(estimate_ph_dim(cloud, cfg), DegenerateCloud);
}

TEST(EstimatePhDim, ScaleInvariant) {
  const auto cloud = gen_cube(2, 3, 600, 2).cloud;
  std::vector<double> scaled(cloud.data().begin(), cloud.data().end());
  for (auto& x : scaled) x *= 7.25;
  EstimatorConfig cfg;
  cfg.n_min = 50;
  cfg.step_delta = 50;
  const double a = estimate_ph_dim(cloud, cfg).estimate;
  const double b = estimate_ph_dim(PointCloud(cloud.size(), cloud.dim(), scaled), cfg).estimate;
  EXPECT_NEAR(a, b, 1e-9);
}

TEST(EstimatePhDim, DeterministicPerSeed) {
  const auto cloud = gen_cube(2, 2, 500, 9).cloud;
  EstimatorConfig cfg;
  cfg.n_min = 50;
  cfg.step_delta = 50;
  cfg.seed = 77;
  EXPECT_EQ(estimate_ph_dim(cloud, cfg), estimate_ph_dim(cloud, cfg));
  auto other = cfg;
  other.seed = 78;
  EXPECT_NE(estimate_ph_dim(cloud, cfg).series, estimate_ph_dim(cloud, other).series);
}

TEST(EstimatePhDim, LargerCapOnlyAppendsSeriesEntries) {
  const auto cloud = gen_cube(2, 2, 800, 10).cloud;
  EstimatorConfig cfg;
  cfg.n_min = 50;
  cfg.step_delta = 50;
  cfg.seed = 3;
  cfg.n_max = 400;
  const auto small = estimate_ph_dim(cloud, cfg).series;
  cfg.n_max = 0;
  const auto large = estimate_ph_dim(cloud, cfg).series;
  ASSERT_EQ(small.entries.size(), 8u);
  ASSERT_EQ(large.entries.size(), 16u);
  for (std::size_t i = 0; i < small.entries.size(); ++i) EXPECT_EQ(small.entries[i], large.entries[i]);
}

TEST(EstimatePhDim, RepetitionsAverageIndependentDraws) {
  const auto cloud = gen_cube(2, 2, 400, 12).cloud;
  EstimatorConfig cfg;
  cfg.n_min = 50;
  cfg.step_delta = 50;
  cfg.repetitions_per_n = 3;
  const auto bars = collect_barcodes(cloud, cfg);
  ASSERT_EQ(bars.barcodes.front().size(), 3u);
  const double mean = (lifetime_sum(bars.barcodes[0][0], 1.0) + lifetime_sum(bars.barcodes[0][1], 1.0) +
                       lifetime_sum(bars.barcodes[0][2], 1.0)) / 3.0;
  EXPECT_DOUBLE_EQ(series_for_alpha(bars, 1.0).entries[0].e_alpha, mean);
  EXPECT_NE(bars.barcodes[0][0], bars.barcodes[0][1]);
  // The final size uses every point, so all repetitions coincide there.
  EXPECT_EQ(bars.barcodes.back()[0], bars.barcodes.back()[2]);
}

TEST(EstimatePhDim, OnTheFlyDistancesMatchDenseMatrix) {
  // Above the dense-matrix limit the estimator computes distances per pair;
  // both paths must see identical lifetimes.
  const auto cloud = oracle::random_cloud(detail::kDenseDistanceLimit + 4, 2, 15);
  EstimatorConfig cfg;
  cfg.n_min = 60;
  cfg.step_delta = 60;
  cfg.n_max = 120;
  const auto bars = collect_barcodes(cloud, cfg);
  Rng rng(derive_seed(cfg.seed, {std::uint64_t{60}, std::uint64_t{0}}));
  const auto idx = sample_without_replacement(cloud.size(), 60, rng);
  EXPECT_EQ(bars.barcodes[0][0], ph0_barcode(pairwise_distances(cloud.select(idx))));
}

TEST(SweepAlpha, MatchesIndividualEstimates) {
  const auto cloud = gen_cube(2, 2, 600, 13).cloud;
  EstimatorConfig cfg;
  cfg.n_min = 60;
  cfg.step_delta = 60;
  const std::vector<double> alphas{0.5, 1.0, 1.5, 3.0};
  const auto pts = sweep_alpha(cloud, cfg, alphas);
  ASSERT_EQ(pts.size(), 4u);
  for (std::size_t i = 0; i < 3; ++i) {
    auto c = cfg;
    c.alpha = alphas[i];
    ASSERT_TRUE(pts[i].report);
    EXPECT_EQ(pts[i].report->estimate, estimate_ph_dim(cloud, c).estimate);
  }
  // alpha above the dimension: lifetime sums shrink with n.
  EXPECT_FALSE(pts[3].report);
  EXPECT_FALSE(pts[3].error.empty());
}

TEST(SampleSizes, Schedule) {
  EstimatorConfig cfg;
  cfg.n_min = 10;
  cfg.step_delta = 7;
  EXPECT_EQ(sample_sizes(cfg, 40), (std::vector<std::size_t>{10, 17, 24, 31, 38}));
  cfg.n_max = 30;
  EXPECT_EQ(sample_sizes(cfg, 40), (std::vector<std::size_t>{10, 17, 24}));
}

TEST(SampleWithoutReplacement, DistinctSortedInRange) {
  Rng rng(5);
  const auto idx = sample_without_replacement(1000, 300, rng);
  ASSERT_EQ(idx.size(), 300u);
  for (std::size_t i = 1; i < idx.size(); ++i) EXPECT_LT(idx[i - 1], idx[i]);
  EXPECT_LT(idx.back(), 1000u);
}
