#ifndef PHDIM_IO_HPP
#define PHDIM_IO_HPP

// File formats: point clouds as CSV or the PHTR binary container, PH0
// barcodes, distance matrices and lifetime-sum series as CSV, and
// dimension reports as JSON.
//
// PHTR layout (all integers little-endian):
//   offset  0  char[4]  magic "PHTR"
//   offset  4  u32      version = 1
//   offset  8  u64      n (points)
//   offset 16  u64      d (dimensions)
//   offset 24  u8       dtype: 4 = float32, 8 = float64
//   offset 25  n*d values, row-major, little-endian IEEE-754

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "phdim/errors.hpp"
#include "phdim/estimator.hpp"
#include "phdim/geometry.hpp"

namespace phdim {

enum class CloudFormat { CSV, PHTR };

enum class PhtrDtype : std::uint8_t { F32 = 4, F64 = 8 };

inline constexpr std::array<char, 4> kPhtrMagic{'P', 'H', 'T', 'R'};
inline constexpr std::uint32_t kPhtrVersion = 1;
inline constexpr std::size_t kPhtrHeaderBytes = 25;
inline constexpr int kReportSchemaVersion = 1;

/// Shortest decimal string that parses back to exactly `v`; integral
/// values keep a trailing ".0" so columns read as reals.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string s(buf.data(), res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

/// Parses a full decimal token (surrounding blanks allowed).
inline std::optional<double> parse_double(std::string_view tok) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) tok.remove_suffix(1);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

/// Numeric table from CSV text. A first non-empty line whose first token is
/// not a number is taken as a header. Blank lines are skipped.
inline std::vector<std::vector<double>> parse_csv_table(std::string_view text, bool allow_header,
                                                        std::size_t* width_out = nullptr) {
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const auto toks = split_commas(line);
    if (first) {
      first = false;
      if (allow_header && !parse_double(toks.front())) continue;
    }
    std::vector<double> row;
    row.reserve(toks.size());
    for (auto t : toks) {
      auto v = parse_double(t);
      if (!v) throw FormatError("not a number: '" + std::string(t) + "'", line_no);
      if (!std::isfinite(*v)) throw InvalidInput("line " + std::to_string(line_no) + ": non-finite value");
      row.push_back(*v);
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw FormatError("expected " + std::to_string(width) + " values, found " + std::to_string(row.size()),
                        line_no);
    }
    rows.push_back(std::move(row));
  }
  if (width_out) *width_out = width;
  return rows;
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

inline std::uint64_t get_le(std::string_view bytes, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int b = 0; b < width; ++b)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + static_cast<std::size_t>(b)]))
         << (8 * b);
  return v;
}

inline PointCloud parse_phtr(std::string_view bytes) {
  if (bytes.size() < kPhtrHeaderBytes) throw FormatError("PHTR: file shorter than its header");
  if (std::memcmp(bytes.data(), kPhtrMagic.data(), kPhtrMagic.size()) != 0)
    throw FormatError("PHTR: bad magic");
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  if (version != kPhtrVersion) throw FormatError("PHTR: unsupported version " + std::to_string(version));
  const std::uint64_t n = get_le(bytes, 8, 8);
  const std::uint64_t d = get_le(bytes, 16, 8);
  const auto dtype = static_cast<std::uint8_t>(bytes[24]);
  if (dtype != 4 && dtype != 8) throw FormatError("PHTR: unknown dtype " + std::to_string(dtype));
  if (n == 0 || d == 0) throw FormatError("PHTR: empty cloud");
  if (d > (bytes.size() - kPhtrHeaderBytes) || n > (bytes.size() - kPhtrHeaderBytes) / d / dtype ||
      kPhtrHeaderBytes + n * d * dtype != bytes.size())
    throw FormatError("PHTR: declared n*d does not match file size");

  std::vector<double> coords(n * d);
  std::size_t off = kPhtrHeaderBytes;
  for (auto& x : coords) {
    if (dtype == 8) {
      x = std::bit_cast<double>(get_le(bytes, off, 8));
    } else {
      x = static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(get_le(bytes, off, 4))));
    }
    off += dtype;
  }
  return PointCloud(n, d, std::move(coords));
}

}  // namespace detail

/// PHTR when the file starts with the magic bytes, CSV otherwise.
inline CloudFormat detect_format(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  return in.gcount() == 4 && head == kPhtrMagic ? CloudFormat::PHTR : CloudFormat::CSV;
}

inline PointCloud read_cloud(const std::filesystem::path& path, CloudFormat format) {
  const std::string bytes = detail::read_file(path);
  if (format == CloudFormat::PHTR) return detail::parse_phtr(bytes);
  std::size_t width = 0;
  auto rows = detail::parse_csv_table(bytes, true, &width);
  if (rows.empty()) throw FormatError("CSV: no data rows in " + path.string());
  std::vector<double> coords;
  coords.reserve(rows.size() * width);
  for (const auto& r : rows) coords.insert(coords.end(), r.begin(), r.end());
  return PointCloud(rows.size(), width, std::move(coords));
}

inline PointCloud read_cloud(const std::filesystem::path& path) { return read_cloud(path, detect_format(path)); }

inline std::string encode_cloud(const PointCloud& cloud, CloudFormat format, PhtrDtype dtype = PhtrDtype::F64) {
  std::string out;
  if (format == CloudFormat::CSV) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      auto r = cloud.row(i);
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (j) out += ',';
        out += format_double(r[j]);
      }
      out += '\n';
    }
    return out;
  }
  out.reserve(kPhtrHeaderBytes + cloud.data().size() * static_cast<std::size_t>(dtype));
  out.append(kPhtrMagic.data(), kPhtrMagic.size());
  detail::put_u32(out, kPhtrVersion);
  detail::put_u64(out, cloud.size());
  detail::put_u64(out, cloud.dim());
  out.push_back(static_cast<char>(dtype));
  for (double x : cloud.data()) {
    if (dtype == PhtrDtype::F64) {
      detail::put_u64(out, std::bit_cast<std::uint64_t>(x));
    } else {
      detail::put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
    }
  }
  return out;
}

inline void write_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format,
                        PhtrDtype dtype = PhtrDtype::F64) {
  detail::write_file(path, encode_cloud(cloud, format, dtype));
}

inline void write_barcode_csv(const Barcode0& barcode, const std::filesystem::path& path) {
  std::string out = "birth,death\n";
  for (double l : barcode.lifetimes) out += "0.0," + format_double(l) + "\n";
  detail::write_file(path, out);
}

inline Barcode0 read_barcode_csv(const std::filesystem::path& path) {
  const auto rows = detail::parse_csv_table(detail::read_file(path), true);
  Barcode0 bc;
  for (const auto& r : rows) {
    if (r.size() != 2) throw FormatError("barcode rows need birth,death");
    bc.lifetimes.push_back(r[1] - r[0]);
  }
  std::sort(bc.lifetimes.begin(), bc.lifetimes.end());
  return bc;
}

inline void write_distance_matrix_csv(const DistanceMatrix& dist, const std::filesystem::path& path) {
  std::string out;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (std::size_t j = 0; j < dist.size(); ++j) {
      if (j) out += ',';
      out += format_double(dist(i, j));
    }
    out += '\n';
  }
  detail::write_file(path, out);
}

inline DistanceMatrix read_distance_matrix_csv(const std::filesystem::path& path) {
  const auto rows = detail::parse_csv_table(detail::read_file(path), false);
  DistanceMatrix dist(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw FormatError("distance matrix is not square", i + 1);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[i][j] != rows[j][i]) throw FormatError("distance matrix is not symmetric", i + 1);
    }
    for (std::size_t j = i + 1; j < rows.size(); ++j) dist.set(i, j, rows[i][j]);
  }
  return dist;
}

inline void write_series_csv(const LifetimeSumSeries& series, const std::filesystem::path& path) {
  std::string out = "n,e_alpha\n";
  for (const auto& e : series.entries) out += std::to_string(e.n) + "," + format_double(e.e_alpha) + "\n";
  detail::write_file(path, out);
}

inline LifetimeSumSeries read_series_csv(const std::filesystem::path& path) {
  LifetimeSumSeries series;
  for (const auto& r : detail::parse_csv_table(detail::read_file(path), true)) {
    if (r.size() != 2) throw FormatError("series rows need n,e_alpha");
    series.entries.push_back({static_cast<std::size_t>(r[0]), r[1]});
  }
  return series;
}

/// JSON form of a report. nlohmann::json keeps object keys sorted, which
/// makes the serialization byte-stable.
inline nlohmann::json report_to_json(const DimensionReport& rep) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["estimate"] = rep.estimate;
  j["alpha"] = rep.config.alpha;
  j["slope"] = rep.fit.slope;
  j["intercept"] = rep.fit.intercept;
  j["fitter"] = std::string(to_string(rep.config.fitter));
  j["seed"] = rep.config.seed;
  j["n_points_total"] = rep.n_points_total;
  j["ambient_dim"] = rep.ambient_dim;
  j["n_min"] = rep.config.n_min;
  j["step_delta"] = rep.config.step_delta;
  j["repetitions_per_n"] = rep.config.repetitions_per_n;
  j["n_max"] = rep.config.n_max;
  j["ransac_iterations"] = rep.config.ransac_iterations;
  j["residual_rms"] = rep.fit.residual_rms;
  j["converged"] = rep.fit.converged;
  j["iterations"] = rep.fit.iterations;
  if (!rep.fit.inlier_mask.empty()) j["inlier_mask"] = rep.fit.inlier_mask;
  auto series = nlohmann::json::array();
  for (const auto& e : rep.series.entries) series.push_back({{"n", e.n}, {"e_alpha", e.e_alpha}});
  j["series"] = std::move(series);
  return j;
}

inline DimensionReport report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) throw FormatError("report: unknown schema_version");
    DimensionReport rep;
    rep.estimate = j.at("estimate").get<double>();
    rep.config.alpha = j.at("alpha").get<double>();
    rep.fit.slope = j.at("slope").get<double>();
    rep.fit.intercept = j.at("intercept").get<double>();
    auto fitter = parse_fitter(j.at("fitter").get<std::string>());
    if (!fitter) throw FormatError("report: unknown fitter");
    rep.config.fitter = *fitter;
    rep.fit.fitter = *fitter;
    rep.config.seed = j.at("seed").get<std::uint64_t>();
    rep.n_points_total = j.at("n_points_total").get<std::size_t>();
    rep.ambient_dim = j.at("ambient_dim").get<std::size_t>();
    rep.config.n_min = j.at("n_min").get<std::size_t>();
    rep.config.step_delta = j.at("step_delta").get<std::size_t>();
    rep.config.repetitions_per_n = j.at("repetitions_per_n").get<std::size_t>();
    rep.config.n_max = j.value("n_max", std::size_t{0});
    rep.config.ransac_iterations = j.value("ransac_iterations", 1000);
    rep.fit.residual_rms = j.at("residual_rms").get<double>();
    rep.fit.converged = j.value("converged", true);
    rep.fit.iterations = j.value("iterations", 0);
    if (j.contains("inlier_mask")) rep.fit.inlier_mask = j.at("inlier_mask").get<std::vector<bool>>();
    for (const auto& e : j.at("series")) rep.series.entries.push_back({e.at("n").get<std::size_t>(), e.at("e_alpha").get<double>()});
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

inline std::string encode_report(const DimensionReport& rep) { return report_to_json(rep).dump(2) + "\n"; }

inline void write_report_json(const DimensionReport& rep, const std::filesystem::path& path) {
  detail::write_file(path, encode_report(rep));
}

inline DimensionReport read_report_json(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  try {
    return report_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

}  // namespace phdim

#endif  // PHDIM_IO_HPP
