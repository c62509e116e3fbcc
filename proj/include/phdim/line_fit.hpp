#ifndef PHDIM_LINE_FIT_HPP
#define PHDIM_LINE_FIT_HPP

// Straight-line fits y = slope * x + intercept: ordinary least squares,
// RANSAC over 2-point samples, and Huber / Tukey M-estimators via IRLS.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phdim/errors.hpp"
#include "phdim/random.hpp"

namespace phdim {

enum class Fitter { LS, RANSAC, HUBER, TUKEY };

inline std::string_view to_string(Fitter f) {
  switch (f) {
    case Fitter::LS: return "ls";
    case Fitter::RANSAC: return "ransac";
    case Fitter::HUBER: return "huber";
    case Fitter::TUKEY: return "tukey";
  }
  return "ls";
}

inline std::optional<Fitter> parse_fitter(std::string_view s) {
  if (s == "ls") return Fitter::LS;
  if (s == "ransac") return Fitter::RANSAC;
  if (s == "huber") return Fitter::HUBER;
  if (s == "tukey") return Fitter::TUKEY;
  return std::nullopt;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  Fitter fitter = Fitter::LS;
  std::vector<bool> inlier_mask;  ///< RANSAC only; empty otherwise
  double residual_rms = 0.0;      ///< over all input points
  bool converged = true;          ///< IRLS fitters only
  int iterations = 0;

  friend bool operator==(const LineFit&, const LineFit&) = default;
};

namespace detail {

inline void check_xy(std::span<const double> xs, std::span<const double> ys, std::size_t min_points) {
  if (xs.size() != ys.size()) throw InvalidInput("line fit: xs and ys differ in length");
  if (xs.size() < min_points)
    throw InvalidInput("line fit: need at least " + std::to_string(min_points) + " points");
}

struct Line {
  double slope;
  double intercept;
};

/// Weighted least squares in centred form. Empty optional when the
/// weighted xs have no spread.
inline std::optional<Line> weighted_ls(std::span<const double> xs, std::span<const double> ys,
                                       std::span<const double> w) {
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += w[i];
    sx += w[i] * xs[i];
    sy += w[i] * ys[i];
  }
  if (!(sw > 0.0)) return std::nullopt;
  const double xm = sx / sw;
  const double ym = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - xm;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * (ys[i] - ym);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  const double slope = sxy / sxx;
  return Line{slope, ym - slope * xm};
}

inline double rms_residual(std::span<const double> xs, std::span<const double> ys, const Line& l) {
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (l.slope * xs[i] + l.intercept);
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(xs.size()));
}

inline double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

inline LineFit make_fit(std::span<const double> xs, std::span<const double> ys, const Line& l, Fitter f) {
  LineFit out;
  out.slope = l.slope;
  out.intercept = l.intercept;
  out.fitter = f;
  out.residual_rms = rms_residual(xs, ys, l);
  return out;
}

}  // namespace detail

/// Ordinary least squares. Throws FitDegenerate when all xs coincide.
inline LineFit fit_line_ls(std::span<const double> xs, std::span<const double> ys) {
  detail::check_xy(xs, ys, 2);
  const std::vector<double> w(xs.size(), 1.0);
  auto line = detail::weighted_ls(xs, ys, w);
  if (!line) throw FitDegenerate("line fit: all x values are equal");
  return detail::make_fit(xs, ys, *line, Fitter::LS);
}

/// RANSAC over 2-point minimal samples.
///
/// The inlier threshold is three times the median absolute residual of an
/// initial least-squares fit (floored at 1e-9 relative to max |y| so that
/// exact data counts as all-inlier). The consensus set with the most
/// inliers wins, ties going to the smaller inlier residual sum; the
/// returned line is least squares on that set. When `iterations` covers
/// every pair, all pairs are tried in order instead of sampling.
inline LineFit fit_line_ransac(std::span<const double> xs, std::span<const double> ys,
                               int iterations = 1000, std::uint64_t seed = 0) {
  detail::check_xy(xs, ys, 3);
  const std::size_t n = xs.size();
  const LineFit initial = fit_line_ls(xs, ys);

  std::vector<double> abs_res(n);
  double y_scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    abs_res[i] = std::abs(ys[i] - (initial.slope * xs[i] + initial.intercept));
    y_scale = std::max(y_scale, std::abs(ys[i]));
  }
  const double threshold = std::max(3.0 * detail::median(abs_res), 1e-9 * y_scale);

  std::vector<bool> best_mask;
  std::size_t best_count = 0;
  double best_cost = std::numeric_limits<double>::infinity();

  auto consider = [&](std::size_t a, std::size_t b) {
    if (xs[a] == xs[b]) return;
    const double slope = (ys[b] - ys[a]) / (xs[b] - xs[a]);
    const double intercept = ys[a] - slope * xs[a];
    std::vector<bool> mask(n, false);
    std::size_t count = 0;
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::abs(ys[i] - (slope * xs[i] + intercept));
      if (r <= threshold) {
        mask[i] = true;
        ++count;
        cost += r;
      }
    }
    if (count > best_count || (count == best_count && cost < best_cost)) {
      best_mask = std::move(mask);
      best_count = count;
      best_cost = cost;
    }
  };

  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (iterations > 0 && pairs <= static_cast<std::uint64_t>(iterations)) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) consider(a, b);
  } else {
    Rng rng(seed);
    for (int it = 0; it < iterations; ++it) {
      const auto a = static_cast<std::size_t>(rng.below(n));
      auto b = static_cast<std::size_t>(rng.below(n - 1));
      if (b >= a) ++b;
      consider(a, b);
    }
  }

  if (best_count < 2) throw FitDegenerate("RANSAC: fewer than 2 inliers survived");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = best_mask[i] ? 1.0 : 0.0;
  auto line = detail::weighted_ls(xs, ys, w);
  if (!line) throw FitDegenerate("RANSAC: inlier set has no spread in x");

  LineFit out = detail::make_fit(xs, ys, *line, Fitter::RANSAC);
  out.inlier_mask = std::move(best_mask);
  return out;
}

namespace detail {

constexpr int kIrlsMaxIterations = 50;
constexpr double kIrlsSlopeTolerance = 1e-10;
constexpr double kHuberTuning = 1.345;
constexpr double kTukeyTuning = 4.685;

/// 1.4826 * MAD, the consistent scale estimate under Gaussian noise.
inline double mad_scale(const std::vector<double>& r) {
  const double med = median(r);
  std::vector<double> dev(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) dev[i] = std::abs(r[i] - med);
  return 1.4826 * median(std::move(dev));
}

inline double huber_weight(double r, double k) {
  const double a = std::abs(r);
  if (k <= 0.0) return a == 0.0 ? 1.0 : 0.0;
  return a <= k ? 1.0 : k / a;
}

inline double tukey_weight(double r, double c) {
  const double a = std::abs(r);
  if (c <= 0.0) return a == 0.0 ? 1.0 : 0.0;
  if (a >= c) return 0.0;
  const double u = a / c;
  const double t = 1.0 - u * u;
  return t * t;
}

template <class WeightFn>
LineFit irls(std::span<const double> xs, std::span<const double> ys, Line start, Fitter f,
             double tuning, WeightFn weight) {
  const std::size_t n = xs.size();
  Line cur = start;
  bool converged = false;
  int it = 0;
  std::vector<double> r(n), w(n);
  while (it < kIrlsMaxIterations) {
    ++it;
    for (std::size_t i = 0; i < n; ++i) r[i] = ys[i] - (cur.slope * xs[i] + cur.intercept);
    const double k = tuning * mad_scale(r);
    for (std::size_t i = 0; i < n; ++i) w[i] = weight(r[i], k);
    auto next = weighted_ls(xs, ys, w);
    if (!next) {
      // Weights collapsed onto a single x; the current line is the best we have.
      converged = true;
      break;
    }
    const double change = std::abs(next->slope - cur.slope);
    cur = *next;
    if (change < kIrlsSlopeTolerance) {
      converged = true;
      break;
    }
  }
  LineFit out = make_fit(xs, ys, cur, f);
  out.converged = converged;
  out.iterations = it;
  return out;
}

}  // namespace detail

/// Huber M-estimator (k = 1.345 sigma, sigma from the MAD of the current
/// residuals), started from least squares. Non-convergence within 50
/// iterations is reported through `converged`, not thrown.
inline LineFit fit_line_huber(std::span<const double> xs, std::span<const double> ys) {
  detail::check_xy(xs, ys, 3);
  const LineFit ls = fit_line_ls(xs, ys);
  return detail::irls(xs, ys, {ls.slope, ls.intercept}, Fitter::HUBER, detail::kHuberTuning,
                      detail::huber_weight);
}

/// Tukey biweight (c = 4.685 sigma). The redescending weights need a robust
/// start, so iterations begin from the Huber solution.
inline LineFit fit_line_tukey(std::span<const double> xs, std::span<const double> ys) {
  detail::check_xy(xs, ys, 3);
  const LineFit start = fit_line_huber(xs, ys);
  LineFit out = detail::irls(xs, ys, {start.slope, start.intercept}, Fitter::TUKEY,
                             detail::kTukeyTuning, detail::tukey_weight);
  out.iterations += start.iterations;
  return out;
}

inline LineFit fit_line(Fitter f, std::span<const double> xs, std::span<const double> ys,
                        int ransac_iterations = 1000, std::uint64_t seed = 0) {
  switch (f) {
    case Fitter::LS: return fit_line_ls(xs, ys);
    case Fitter::RANSAC: return fit_line_ransac(xs, ys, ransac_iterations, seed);
    case Fitter::HUBER: return fit_line_huber(xs, ys);
    case Fitter::TUKEY: return fit_line_tukey(xs, ys);
  }
  return fit_line_ls(xs, ys);
}

}  // namespace phdim

#endif  // PHDIM_LINE_FIT_HPP
