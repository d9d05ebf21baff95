#ifndef RANDCS_REPORT_HPP
#define RANDCS_REPORT_HPP

// CSV and plain-text output for harness results.
//
// Trial CSV columns, in order:
//   method,n,s,k,r0,trial,seed,R,wall_time_s,pred_size,true_size,inter_size,
//   gen_time_s,iht_iters,iht_step,error
// Floats are written with 17 significant digits so they parse back to the
// same bits.  Fields are quoted per RFC 4180 only when needed.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "randcs/error.hpp"
#include "randcs/harness.hpp"

namespace randcs {

inline constexpr std::array<std::string_view, 16> kTrialCsvColumns{
    "method",     "n",         "s",          "k",          "r0",        "trial",
    "seed",       "R",         "wall_time_s", "pred_size", "true_size", "inter_size",
    "gen_time_s", "iht_iters", "iht_step",   "error"};

inline constexpr std::array<std::string_view, 9> kSummaryCsvColumns{
    "method", "n", "s", "trials", "failures", "mean_R", "var_R", "mean_wall_time_s", "speedup"};

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

inline std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Splits one CSV record; embedded newlines inside quotes are consumed from
/// `in`.  Returns false at end of input.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (quoted) {
        if (!std::getline(in, line)) throw FormatError("unterminated quoted CSV field");
        field += '\n';
        i = static_cast<std::size_t>(-1);
        continue;
      }
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

inline void write_trial_csv(std::ostream& out, const std::vector<TrialResult>& results) {
  for (std::size_t c = 0; c < kTrialCsvColumns.size(); ++c) {
    out << (c ? "," : "") << kTrialCsvColumns[c];
  }
  out << '\n';
  for (const auto& r : results) {
    out << to_string(r.method) << ',' << r.n << ',' << r.s << ',' << r.k << ',' << r.r0
        << ',' << r.trial << ',' << r.seed << ',' << format_double(r.accuracy) << ','
        << format_double(r.wall_time_s) << ',' << r.pred_size << ',' << r.true_size << ','
        << r.inter_size << ',' << format_double(r.gen_time_s) << ',' << r.iht_iters << ','
        << format_double(r.iht_step) << ',' << csv_quote(r.error) << '\n';
  }
}

namespace detail {

template <typename T>
T parse_integer(const std::string& text, std::string_view column) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw FormatError("bad integer '" + text + "' in column " + std::string(column));
  }
  return value;
}

inline double parse_real(const std::string& text, std::string_view column) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw FormatError("bad number '" + text + "' in column " + std::string(column));
  }
  return value;
}

inline Method parse_method_tag(const std::string& tag) {
  for (Method m : {Method::basic, Method::suppressed, Method::support, Method::omp,
                   Method::biht, Method::nbiht}) {
    if (tag == to_string(m)) return m;
  }
  throw FormatError("unknown method tag '" + tag + "'");
}

}  // namespace detail

inline std::vector<TrialResult> read_trial_csv(std::istream& in) {
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields)) throw FormatError("empty CSV");
  if (fields.size() != kTrialCsvColumns.size() ||
      !std::equal(fields.begin(), fields.end(), kTrialCsvColumns.begin())) {
    throw FormatError("unexpected CSV header");
  }
  std::vector<TrialResult> results;
  while (read_csv_record(in, fields)) {
    if (fields.size() != kTrialCsvColumns.size()) {
      throw FormatError("CSV row " + std::to_string(results.size() + 1) + " has " +
                        std::to_string(fields.size()) + " fields");
    }
    TrialResult r;
    r.method = detail::parse_method_tag(fields[0]);
    r.n = detail::parse_integer<std::size_t>(fields[1], "n");
    r.s = detail::parse_integer<std::size_t>(fields[2], "s");
    r.k = detail::parse_integer<std::size_t>(fields[3], "k");
    r.r0 = detail::parse_integer<std::size_t>(fields[4], "r0");
    r.trial = detail::parse_integer<std::size_t>(fields[5], "trial");
    r.seed = detail::parse_integer<std::uint64_t>(fields[6], "seed");
    r.accuracy = detail::parse_real(fields[7], "R");
    r.wall_time_s = detail::parse_real(fields[8], "wall_time_s");
    r.pred_size = detail::parse_integer<std::size_t>(fields[9], "pred_size");
    r.true_size = detail::parse_integer<std::size_t>(fields[10], "true_size");
    r.inter_size = detail::parse_integer<std::size_t>(fields[11], "inter_size");
    r.gen_time_s = detail::parse_real(fields[12], "gen_time_s");
    r.iht_iters = detail::parse_integer<std::size_t>(fields[13], "iht_iters");
    r.iht_step = detail::parse_real(fields[14], "iht_step");
    r.error = fields[15];
    results.push_back(std::move(r));
  }
  return results;
}

inline void emit_csv(const std::vector<TrialResult>& results,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_trial_csv(out, results);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::vector<TrialResult> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_trial_csv(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  for (std::size_t c = 0; c < kSummaryCsvColumns.size(); ++c) {
    out << (c ? "," : "") << kSummaryCsvColumns[c];
  }
  out << '\n';
  for (const auto& r : rows) {
    out << to_string(r.method) << ',' << r.n << ',' << r.s << ',' << r.trials << ','
        << r.failures << ',' << format_double(r.mean_accuracy) << ','
        << format_double(r.var_accuracy) << ',' << format_double(r.mean_time_s) << ','
        << format_double(r.speedup) << '\n';
  }
}

/// Column-aligned table for humans.
inline void write_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows) {
  const std::array<std::string, 9> header{"method", "n",     "s",          "trials", "failed",
                                          "mean R", "var R", "mean time s", "speedup"};
  std::vector<std::array<std::string, 9>> cells;
  cells.push_back(header);
  const auto fixed = [](double x, int digits) {
    if (std::isnan(x)) return std::string("n/a");
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << x;
    return s.str();
  };
  for (const auto& r : rows) {
    cells.push_back({to_string(r.method), std::to_string(r.n), std::to_string(r.s),
                     std::to_string(r.trials), std::to_string(r.failures),
                     fixed(r.mean_accuracy, 4), fixed(r.var_accuracy, 6),
                     fixed(r.mean_time_s, 6), fixed(r.speedup, 2)});
  }
  std::array<std::size_t, 9> width{};
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < width.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < width.size(); ++c) {
      if (c) out << "  ";
      // Method name left-aligned, numbers right-aligned.
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << line[c];
      } else {
        out << std::right << std::setw(static_cast<int>(width[c])) << line[c];
      }
    }
    out << '\n';
  }
}

/// Path of the CSV twin written next to a summary table: the table path with
/// a .csv extension, or .summary.csv when that would clobber the table itself
/// or `avoid` (typically the per-trial CSV).
inline std::filesystem::path summary_csv_path(const std::filesystem::path& table_path,
                                              const std::filesystem::path& avoid = {}) {
  auto twin = table_path;
  twin.replace_extension(".csv");
  if (twin == table_path || (!avoid.empty() && twin.lexically_normal() == avoid.lexically_normal())) {
    twin.replace_extension(".summary.csv");
  }
  return twin;
}

/// Writes the aligned table to `path` and its CSV twin to
/// summary_csv_path(path, avoid).
inline void emit_summary(const std::vector<SummaryRow>& rows,
                         const std::filesystem::path& path,
                         const std::filesystem::path& avoid = {}) {
  {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_summary_table(out, rows);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  }
  const auto twin = summary_csv_path(path, avoid);
  std::ofstream out(twin);
  if (!out) throw IoError("cannot open '" + twin.string() + "' for writing");
  write_summary_csv(out, rows);
  if (!out) throw IoError("write failed for '" + twin.string() + "'");
}

}  // namespace randcs

#endif  // RANDCS_REPORT_HPP
