#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "enee/errors.hpp"
#include "enee/record.hpp"

namespace enee {

/// Floats are serialized with 10 significant digits, locale-independent.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

namespace csv_detail {

inline double parse_double(std::string_view s, const char* field) {
  double v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError(std::string("bad numeric field ") + field + ": '" +
                  std::string(s) + "'");
  return v;
}

inline std::int64_t parse_int(std::string_view s, const char* field) {
  std::int64_t v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError(std::string("bad integer field ") + field + ": '" +
                  std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_u64(std::string_view s, const char* field) {
  std::uint64_t v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError(std::string("bad integer field ") + field + ": '" +
                  std::string(s) + "'");
  return v;
}

inline std::optional<double> parse_opt(std::string_view s, const char* field) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, field);
}

/// Split one RFC-4180 record; handles quoted fields with "" escapes.
inline std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace csv_detail

inline constexpr const char* kRecordHeader =
    "scenario,hr,sim_index,base_seed,stream_seed,n_C,n_E,d_C,d_E,d_ext,"
    "kappa,tau2_ref,tau2_hyb,estimate_exact,estimate_ehss_events,"
    "estimate_ehss_patients,estimate_generalized,derivative,stability,"
    "effective_patients_generalized,regeneration_count";

inline constexpr const char* kSummaryHeader =
    "stability_stratum,hr,method,n_sims,bias,sd";

inline void emit_records(const std::vector<SimulationRecord>& records,
                         std::ostream& out) {
  out << kRecordHeader << "\r\n";
  for (const SimulationRecord& r : records) {
    out << to_string(r.scenario) << ',' << format_double(r.hr) << ','
        << r.sim_index << ',' << r.base_seed << ',' << r.stream_seed << ','
        << r.n_C << ',' << r.n_E << ',' << r.d_C << ',' << r.d_E << ','
        << r.d_ext << ',' << format_double(r.kappa) << ','
        << format_double(r.tau2_ref) << ',' << format_double(r.tau2_hyb) << ','
        << format_optional(r.estimate_exact) << ','
        << format_double(r.estimate_ehss_events) << ','
        << format_double(r.estimate_ehss_patients) << ','
        << format_optional(r.estimate_generalized) << ','
        << format_optional(r.derivative) << ',' << to_string(r.stability)
        << ',' << format_optional(r.effective_patients_generalized) << ','
        << r.regeneration_count << "\r\n";
  }
}

inline void emit_records_file(const std::vector<SimulationRecord>& records,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  emit_records(records, out);
  if (!out) throw IoError("write failed: " + path);
}

inline std::vector<SimulationRecord> parse_records(std::istream& in,
                                                   const std::string& path = "<stream>") {
  using namespace csv_detail;
  const std::vector<std::string> lines = read_lines(in);
  if (lines.empty()) throw IoError("empty records file: " + path);
  if (lines.front() != kRecordHeader)
    throw IoError("unexpected records header in " + path);
  std::vector<SimulationRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = split_record(lines[i]);
    if (f.size() != 21)
      throw IoError("bad field count at " + path + ":" + std::to_string(i + 1));
    SimulationRecord r;
    r.scenario = scenario_from_string(f[0]);
    r.hr = parse_double(f[1], "hr");
    r.sim_index = static_cast<int>(parse_int(f[2], "sim_index"));
    r.base_seed = parse_u64(f[3], "base_seed");
    r.stream_seed = parse_u64(f[4], "stream_seed");
    r.n_C = static_cast<int>(parse_int(f[5], "n_C"));
    r.n_E = static_cast<int>(parse_int(f[6], "n_E"));
    r.d_C = static_cast<int>(parse_int(f[7], "d_C"));
    r.d_E = static_cast<int>(parse_int(f[8], "d_E"));
    r.d_ext = static_cast<int>(parse_int(f[9], "d_ext"));
    r.kappa = parse_double(f[10], "kappa");
    r.tau2_ref = parse_double(f[11], "tau2_ref");
    r.tau2_hyb = parse_double(f[12], "tau2_hyb");
    r.estimate_exact = parse_opt(f[13], "estimate_exact");
    r.estimate_ehss_events = parse_double(f[14], "estimate_ehss_events");
    r.estimate_ehss_patients = parse_double(f[15], "estimate_ehss_patients");
    r.estimate_generalized = parse_opt(f[16], "estimate_generalized");
    r.derivative = parse_opt(f[17], "derivative");
    r.stability = stability_from_string(f[18]);
    r.effective_patients_generalized =
        parse_opt(f[19], "effective_patients_generalized");
    r.regeneration_count = static_cast<int>(parse_int(f[20], "regeneration_count"));
    records.push_back(r);
  }
  return records;
}

inline std::vector<SimulationRecord> parse_records_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return parse_records(in, path);
}

inline void emit_summary(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << kSummaryHeader << "\r\n";
  for (const SummaryRow& r : rows) {
    out << r.stability_stratum << ',' << format_double(r.hr) << ',' << r.method
        << ',' << r.n_sims << ',' << format_double(r.bias) << ','
        << format_double(r.sd) << "\r\n";
  }
}

inline void emit_summary_file(const std::vector<SummaryRow>& rows,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  emit_summary(rows, out);
  if (!out) throw IoError("write failed: " + path);
}

inline std::string records_to_string(const std::vector<SimulationRecord>& records) {
  std::ostringstream oss;
  emit_records(records, oss);
  return oss.str();
}

}  // namespace enee
