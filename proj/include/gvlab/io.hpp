#pragma once

// Artifact serialization: CSV for series, JSON for run records. Every writer
// goes through the same atomic path (write to a sibling temp file, rename
// into place) so a crash can truncate at most the temp file, never a named
// artifact. Formatting is full-precision and locale-independent; identical
// inputs produce byte-identical files.

#include "gvlab/volterra.hpp"
#include "gvlab/mellin.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvlab::io {

inline constexpr const char* kVersion = "0.1.0";

namespace detail {
inline double as_double(double x) { return x; }
inline double as_double(const BigFloat& x) { return x.convert_to<double>(); }
}  // namespace detail

// shortest decimal string that parses back to the same double
inline std::string full_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// CSV writers. UTF-8, header row, '.' decimal separator.
// ---------------------------------------------------------------------------

template <class T>
std::string solution_csv(const volterra::Solution<T>& sol) {
  std::string out = "n,a_n,A_n,n·a_n\n";
  for (std::size_t n = 1; n < sol.a.size(); ++n) {
    const double a = detail::as_double(sol.a[n]);
    const double A = detail::as_double(sol.A[n]);
    out += std::to_string(n);
    out += ',';
    out += full_double(a);
    out += ',';
    out += full_double(A);
    out += ',';
    out += full_double(a * static_cast<double>(n));
    out += '\n';
  }
  return out;
}

inline std::string sequence_csv(const std::vector<double>& values) {
  std::string out = "n,value\n";
  for (std::size_t n = 1; n < values.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += full_double(values[n]);
    out += '\n';
  }
  return out;
}

// scaled series payload: n, a(n), n^p a(n)
inline std::string scaled_csv(const std::vector<double>& a, const std::vector<double>& scaled) {
  if (a.size() != scaled.size()) throw std::invalid_argument("scaled series length mismatch");
  std::string out = "n,a_n,scaled\n";
  for (std::size_t n = 1; n < a.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += full_double(a[n]);
    out += ',';
    out += full_double(scaled[n]);
    out += '\n';
  }
  return out;
}

inline std::string zeros_csv(const std::vector<mellin::ZeroRecord>& zeros) {
  std::string out = "re,im,residual,factor\n";
  for (const mellin::ZeroRecord& r : zeros) {
    out += full_double(r.location.real());
    out += ',';
    out += full_double(r.location.imag());
    out += ',';
    out += full_double(r.residual);
    out += ',';
    out += r.factor;
    out += '\n';
  }
  return out;
}

inline std::string values_csv(
    const std::vector<std::pair<mellin::Complex, mellin::MellinValue>>& rows) {
  std::string out = "re_z,im_z,re,im,abs_error\n";
  for (const auto& [z, v] : rows) {
    out += full_double(z.real());
    out += ',';
    out += full_double(z.imag());
    out += ',';
    out += full_double(v.value.real());
    out += ',';
    out += full_double(v.value.imag());
    out += ',';
    out += full_double(v.abs_error);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV readers for the writers above (round-trip checks and downstream reuse)
// ---------------------------------------------------------------------------

struct SolutionTable {
  std::vector<std::uint64_t> n;
  std::vector<double> a, A, na;
};

inline SolutionTable parse_solution_csv(const std::string& text) {
  SolutionTable t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) throw std::runtime_error("malformed csv row: " + line);
    t.n.push_back(std::stoull(cells[0]));
    t.a.push_back(std::stod(cells[1]));
    t.A.push_back(std::stod(cells[2]));
    t.na.push_back(std::stod(cells[3]));
  }
  return t;
}

// ---------------------------------------------------------------------------
// JSON run record: {config, results, residuals, timing, version}
// ---------------------------------------------------------------------------

inline nlohmann::json run_record(nlohmann::json config, nlohmann::json results,
                                 nlohmann::json residuals, nlohmann::json timing) {
  return nlohmann::json{{"config", std::move(config)},
                        {"results", std::move(results)},
                        {"residuals", std::move(residuals)},
                        {"timing", std::move(timing)},
                        {"version", kVersion}};
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  atomic_write(path, j.dump(2) + "\n");
}

}  // namespace gvlab::io
