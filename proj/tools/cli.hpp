#ifndef PHDIM_TOOLS_CLI_HPP
#define PHDIM_TOOLS_CLI_HPP

// Command-line front end. `run` is separate from main() so tests can drive
// it in-process.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error,
// 3 estimation error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "phdim/phdim.hpp"

namespace phdim::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kEstimation = 3 };

/// Bad flag values detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure while loading input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct EstimatorFlags {
  double alpha = 1.0;
  std::optional<std::size_t> n_min;
  std::optional<std::size_t> step;
  std::size_t reps = 1;
  std::string fitter = "ls";
  std::size_t n_max = 0;
  int ransac_iterations = 1000;

  void add_to(CLI::App& app, bool schedule_required) {
    app.add_option("--alpha", alpha, "Lifetime exponent alpha (> 0)")->capture_default_str();
    auto* nm = app.add_option("--n-min", n_min, "Smallest subsample size");
    auto* st = app.add_option("--step", step, "Subsample size increment");
    if (schedule_required) {
      nm->required();
      st->required();
    }
    app.add_option("--reps", reps, "Subsamples per size; raise to reduce variance")->capture_default_str();
    app.add_option("--fitter", fitter, "Line fitter")
        ->check(CLI::IsMember({"ls", "ransac", "huber", "tukey"}))
        ->capture_default_str();
    app.add_option("--n-max", n_max, "Largest subsample size (0 = all points)")->capture_default_str();
    app.add_option("--ransac-iterations", ransac_iterations, "RANSAC iterations")->capture_default_str();
  }

  EstimatorConfig config(std::size_t k, std::uint64_t seed) const {
    EstimatorConfig cfg = default_config_for(k);
    cfg.alpha = alpha;
    if (n_min) cfg.n_min = *n_min;
    if (step) cfg.step_delta = *step;
    cfg.repetitions_per_n = reps;
    cfg.fitter = *parse_fitter(fitter);
    cfg.seed = seed;
    cfg.n_max = n_max;
    cfg.ransac_iterations = ransac_iterations;
    try {
      cfg.validate();
    } catch (const InvalidInput& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

inline PointCloud load_cloud(const std::string& path) {
  try {
    return read_cloud(path);
  } catch (const Error& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path + " failed");
}

/// START:STOP:STEP, inclusive of STOP up to rounding.
inline std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(':', start);
    auto v = parse_double(std::string_view(text).substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (!v) throw UsageError("--alphas expects START:STOP:STEP, got '" + text + "'");
    parts.push_back(*v);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3) throw UsageError("--alphas expects START:STOP:STEP, got '" + text + "'");
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(lo > 0.0)) throw UsageError("--alphas: alpha must be positive");
  if (hi < lo) throw UsageError("--alphas: STOP is below START");
  if (!(step > 0.0)) throw UsageError("--alphas: STEP must be positive");
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double a = lo + static_cast<double>(i) * step;
    if (a > hi + 1e-9 * step) break;
    grid.push_back(a);
  }
  return grid;
}

inline nlohmann::json baseline_json(const BaselineEstimate& b) {
  nlohmann::json j;
  j["method"] = std::string(to_string(b.method));
  j["estimate"] = b.estimate;
  j["params"] = b.params;
  return j;
}

}  // namespace detail

/// Runs one invocation; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Persistent-homology intrinsic dimension toolkit", "phdim"};
  app.require_subcommand(1);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate the PH dimension of a point cloud");
  std::string est_input, est_output;
  std::uint64_t est_seed = 0;
  detail::EstimatorFlags est_flags;
  estimate->add_option("--input", est_input, "Point cloud (CSV or PHTR)")->required();
  estimate->add_option("--seed", est_seed, "Seed for subsampling")->required();
  estimate->add_option("--output,-o", est_output, "Report JSON path");
  est_flags.add_to(*estimate, true);

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a cloud with known intrinsic dimension");
  std::string gen_kind, gen_output, gen_mode = "iso", gen_format = "csv", gen_dtype = "f64";
  std::size_t gen_d = 0, gen_n = 0, gen_k = 2;
  double gen_beta = 1.5;
  std::uint64_t gen_seed = 0;
  generate->add_option("kind", gen_kind, "levy | sphere | cube | brownian")
      ->required()
      ->check(CLI::IsMember({"levy", "sphere", "cube", "brownian"}));
  generate->add_option("--d", gen_d, "Ambient dimension")->required();
  generate->add_option("--n", gen_n, "Number of points / steps")->required();
  generate->add_option("--k", gen_k, "Intrinsic dimension for sphere/cube")->capture_default_str();
  generate->add_option("--beta", gen_beta, "Tail index for levy")->capture_default_str();
  generate->add_option("--mode", gen_mode, "Levy increments")->check(CLI::IsMember({"iso", "coord"}))->capture_default_str();
  generate->add_option("--seed", gen_seed, "Seed")->required();
  generate->add_option("-o,--output", gen_output, "Output cloud path")->required();
  generate->add_option("--format", gen_format, "Output format")->check(CLI::IsMember({"csv", "phtr"}))->capture_default_str();
  generate->add_option("--dtype", gen_dtype, "PHTR value type")->check(CLI::IsMember({"f32", "f64"}))->capture_default_str();

  // compare
  auto* compare = app.add_subcommand("compare", "Run several dimension estimators on one cloud");
  std::string cmp_input, cmp_output, cmp_methods;
  std::uint64_t cmp_seed = 0;
  std::size_t cmp_k = 10;
  double cmp_threshold = 0.95;
  detail::EstimatorFlags cmp_flags;
  compare->add_option("--input", cmp_input, "Point cloud")->required();
  compare->add_option("--methods", cmp_methods, "Comma list of ph0,twonn,corr,mle,pca")->required();
  compare->add_option("--seed", cmp_seed, "Seed")->required();
  compare->add_option("-o,--output", cmp_output, "Output JSON path")->required();
  compare->add_option("--mle-k", cmp_k, "Neighbours for MLE")->capture_default_str();
  compare->add_option("--pca-threshold", cmp_threshold, "Explained variance for PCA")->capture_default_str();
  cmp_flags.add_to(*compare, false);

  // sweep-alpha
  auto* sweep = app.add_subcommand("sweep-alpha", "Estimate over a grid of alpha values");
  std::string sw_input, sw_output, sw_grid;
  std::uint64_t sw_seed = 0;
  detail::EstimatorFlags sw_flags;
  sweep->add_option("--input", sw_input, "Point cloud")->required();
  sweep->add_option("--alphas", sw_grid, "START:STOP:STEP")->required();
  sweep->add_option("--seed", sw_seed, "Seed")->required();
  sweep->add_option("-o,--output", sw_output, "Output CSV path")->required();
  sw_flags.add_to(*sweep, false);

  // bound
  auto* bound = app.add_subcommand("bound", "Evaluate the PH-dimension generalization bound");
  BoundInputs bin;
  std::string bound_output;
  bound->add_option("--B", bin.loss_bound, "Loss bound")->required();
  bound->add_option("--L", bin.lipschitz, "Lipschitz constant")->required();
  bound->add_option("--n", bin.n, "Number of training samples")->required();
  bound->add_option("--M", bin.decoupling, "Decoupling constant (>= 1)")->capture_default_str();
  bound->add_option("--gamma", bin.gamma, "Failure probability")->required();
  bound->add_option("--dim-ph", bin.dim_ph, "PH dimension")->required();
  bound->add_option("-o,--output", bound_output, "Optional JSON path");

  // export
  auto* exporter = app.add_subcommand("export", "Write plot-ready CSV artifacts");
  std::string ex_input, ex_output, ex_what;
  std::uint64_t ex_seed = 0;
  detail::EstimatorFlags ex_flags;
  exporter->add_option("--input", ex_input, "Point cloud")->required();
  exporter->add_option("--what", ex_what, "distmatrix | barcode | series")
      ->required()
      ->check(CLI::IsMember({"distmatrix", "barcode", "series"}));
  exporter->add_option("-o,--output", ex_output, "Output CSV path")->required();
  exporter->add_option("--seed", ex_seed, "Seed for series subsampling");
  ex_flags.add_to(*exporter, false);

  std::vector<const char*> argv{"phdim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*estimate) {
      const PointCloud cloud = detail::load_cloud(est_input);
      const EstimatorConfig cfg = est_flags.config(cloud.size(), est_seed);
      DimensionReport rep;
      try {
        rep = estimate_ph_dim(cloud, cfg);
      } catch (const Error& e) {
        err << e.what() << "\n";
        return kEstimation;
      }
      if (!est_output.empty()) write_report_json(rep, est_output);
      out << "dim_ph=" << format_double(rep.estimate) << "\n";
      return kOk;
    }

    if (*generate) {
      GroundTruthCloud g;
      try {
        if (gen_kind == "levy" || gen_kind == "brownian") {
          LevyConfig lc;
          lc.ambient_dim = gen_d;
          lc.n_steps = gen_n;
          lc.beta = gen_kind == "brownian" ? 2.0 : gen_beta;
          lc.mode = gen_mode == "iso" ? LevyMode::ISOTROPIC : LevyMode::COORDINATE;
          lc.seed = gen_seed;
          g = gen_levy(lc);
        } else if (gen_kind == "sphere") {
          g = gen_sphere(gen_k, gen_d, gen_n, gen_seed);
        } else {
          g = gen_cube(gen_k, gen_d, gen_n, gen_seed);
        }
      } catch (const InvalidInput& e) {
        throw UsageError(e.what());
      }
      write_cloud(g.cloud, gen_output, gen_format == "csv" ? CloudFormat::CSV : CloudFormat::PHTR,
                  gen_dtype == "f32" ? PhtrDtype::F32 : PhtrDtype::F64);
      nlohmann::json side;
      side["generator"] = std::string(to_string(g.generator));
      side["true_dim"] = g.true_dim;
      side["n"] = g.cloud.size();
      side["ambient_dim"] = g.cloud.dim();
      side["seed"] = gen_seed;
      side["format"] = gen_format;
      if (g.generator == Generator::LEVY) {
        side["beta"] = g.beta;
        side["mode"] = std::string(to_string(g.mode));
      } else {
        side["intrinsic_dim"] = g.intrinsic_dim;
      }
      detail::write_text(gen_output + ".json", side.dump(2) + "\n");
      out << "generated=" << gen_kind << " n=" << g.cloud.size() << " d=" << g.cloud.dim()
          << " true_dim=" << format_double(g.true_dim) << "\n";
      return kOk;
    }

    if (*compare) {
      std::vector<std::string> methods;
      std::stringstream ss(cmp_methods);
      for (std::string m; std::getline(ss, m, ',');) {
        if (m.empty()) continue;
        if (m != "ph0" && m != "twonn" && m != "corr" && m != "mle" && m != "pca")
          throw UsageError("unknown method '" + m + "'");
        methods.push_back(m);
      }
      if (methods.empty()) throw UsageError("--methods is empty");
      const PointCloud cloud = detail::load_cloud(cmp_input);
      const EstimatorConfig cfg = cmp_flags.config(cloud.size(), cmp_seed);

      auto records = nlohmann::json::array();
      std::string summary;
      bool failed = false;
      for (const auto& m : methods) {
        nlohmann::json rec;
        try {
          if (m == "ph0") {
            const auto rep = estimate_ph_dim(cloud, cfg);
            rec["method"] = "ph0";
            rec["estimate"] = rep.estimate;
            rec["params"] = {{"alpha", cfg.alpha},     {"n_min", cfg.n_min},
                             {"step_delta", cfg.step_delta}, {"repetitions_per_n", cfg.repetitions_per_n},
                             {"fitter", std::string(to_string(cfg.fitter))},
                             {"seed", cfg.seed},       {"slope", rep.fit.slope}};
          } else if (m == "twonn") {
            rec = detail::baseline_json(twonn_dim(cloud));
          } else if (m == "corr") {
            rec = detail::baseline_json(correlation_dim(cloud));
          } else if (m == "mle") {
            rec = detail::baseline_json(mle_dim(cloud, cmp_k));
          } else {
            rec = detail::baseline_json(pca_dim(cloud, cmp_threshold));
          }
          summary += (summary.empty() ? "" : " ") + m + "=" + format_double(rec["estimate"].get<double>());
        } catch (const Error& e) {
          failed = true;
          rec = {{"method", m}, {"estimate", nullptr}, {"error", e.what()}};
          summary += (summary.empty() ? "" : " ") + m + "=error";
        }
        records.push_back(std::move(rec));
      }
      detail::write_text(cmp_output, records.dump(2) + "\n");
      out << summary << "\n";
      return failed ? kEstimation : kOk;
    }

    if (*sweep) {
      const auto grid = detail::parse_grid(sw_grid);
      const PointCloud cloud = detail::load_cloud(sw_input);
      const EstimatorConfig cfg = sw_flags.config(cloud.size(), sw_seed);
      std::vector<SweepPoint> points;
      try {
        points = sweep_alpha(cloud, cfg, grid);
      } catch (const Error& e) {
        err << e.what() << "\n";
        return kEstimation;
      }
      std::string csv = "alpha,estimate,error\n";
      std::size_t ok = 0;
      for (const auto& p : points) {
        csv += format_double(p.alpha) + ",";
        if (p.report) {
          csv += format_double(p.report->estimate) + ",\n";
          ++ok;
        } else {
          std::string msg = p.error;
          for (auto& c : msg)
            if (c == ',' || c == '\n') c = ' ';
          csv += "nan," + msg + "\n";
        }
      }
      detail::write_text(sw_output, csv);
      out << "alphas=" << points.size() << " ok=" << ok << "\n";
      return kOk;
    }

    if (*bound) {
      double value = 0.0;
      try {
        value = generalization_bound(bin);
      } catch (const InvalidInput& e) {
        throw UsageError(e.what());
      }
      if (!bound_output.empty()) {
        nlohmann::json j{{"B", bin.loss_bound}, {"L", bin.lipschitz}, {"n", bin.n},        {"M", bin.decoupling},
                         {"gamma", bin.gamma},  {"dim_ph", bin.dim_ph}, {"bound", value}};
        detail::write_text(bound_output, j.dump(2) + "\n");
      }
      out << "bound=" << format_double(value) << "\n";
      return kOk;
    }

    if (*exporter) {
      const PointCloud cloud = detail::load_cloud(ex_input);
      std::size_t rows = 0;
      try {
        if (ex_what == "distmatrix") {
          write_distance_matrix_csv(pairwise_distances(cloud), ex_output);
          rows = cloud.size();
        } else if (ex_what == "barcode") {
          const Barcode0 bc = ph0_barcode(cloud);
          write_barcode_csv(bc, ex_output);
          rows = bc.size();
        } else {
          const EstimatorConfig cfg = ex_flags.config(cloud.size(), ex_seed);
          const auto bars = collect_barcodes(cloud, cfg);
          const auto series = series_for_alpha(bars, cfg.alpha);
          write_series_csv(series, ex_output);
          rows = series.entries.size();
        }
      } catch (const IoError&) {
        throw;
      } catch (const Error& e) {
        err << e.what() << "\n";
        return kEstimation;
      }
      out << "exported=" << ex_what << " rows=" << rows << "\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kEstimation;
  }
  return kUsage;
}

}  // namespace phdim::cli

#endif  // PHDIM_TOOLS_CLI_HPP
