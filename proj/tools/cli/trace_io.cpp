#include "trace_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "aci/error.hpp"

namespace aci::cli {

namespace {

constexpr std::array<const char*, 7> kAciColumns = {
    "k", "norm_w_tilde", "norm_v_tilde", "alpha", "beta", "diff_v", "diff_w"};
constexpr std::array<const char*, 4> kCgColumns = {"k", "residual_norm", "a_norm_error",
                                                   "diff_y2"};

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorKind::invalid_argument, "trace CSV: " + what);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::vector<std::vector<std::string>> split_lines(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split(line));
  }
  return rows;
}

/// Validates the fixed leading columns and the vector columns; returns n.
template <std::size_t N>
std::size_t check_header(const std::vector<std::string>& header,
                         const std::array<const char*, N>& fixed,
                         std::initializer_list<const char*> vector_prefixes) {
  if (header.size() < N) schema_error("header has too few columns");
  for (std::size_t i = 0; i < N; ++i) {
    if (header[i] != fixed[i]) {
      schema_error("column " + std::to_string(i) + " is '" + header[i] + "', expected '" +
                   fixed[i] + "'");
    }
  }
  const std::size_t extra = header.size() - N;
  const std::size_t groups = vector_prefixes.size();
  if (extra % groups != 0) schema_error("vector columns are incomplete");
  const std::size_t n = extra / groups;
  std::size_t col = N;
  for (const char* prefix : vector_prefixes) {
    for (std::size_t i = 0; i < n; ++i, ++col) {
      const std::string expected = std::string(prefix) + "_" + std::to_string(i);
      if (header[col] != expected) {
        schema_error("column " + std::to_string(col) + " is '" + header[col] + "', expected '" +
                     expected + "'");
      }
    }
  }
  return n;
}

double cell(const std::vector<std::string>& row, std::size_t col,
            const std::vector<std::string>& header, std::size_t line) {
  try {
    return parse_double(row[col]);
  } catch (const Error&) {
    schema_error("column '" + header[col] + "' line " + std::to_string(line) +
                 ": not a number '" + row[col] + "'");
  }
}

std::size_t index_cell(const std::vector<std::string>& row, std::size_t line) {
  std::size_t k = 0;
  const char* first = row[0].data();
  const char* last = first + row[0].size();
  const auto [ptr, ec] = std::from_chars(first, last, k);
  if (ec != std::errc() || ptr != last) {
    schema_error("column 'k' line " + std::to_string(line) + ": not an index '" + row[0] + "'");
  }
  return k;
}

/// Reads a vector block; nullopt when every cell is empty.
std::optional<Vector> vector_cells(const std::vector<std::string>& row, std::size_t first,
                                   std::size_t n, const std::vector<std::string>& header,
                                   std::size_t line) {
  if (n == 0) return std::nullopt;
  bool any = false, all = true;
  for (std::size_t i = 0; i < n; ++i) {
    const bool empty = row[first + i].empty();
    any = any || !empty;
    all = all && !empty;
  }
  if (!any) return std::nullopt;
  if (!all) {
    schema_error("column '" + header[first] + "' line " + std::to_string(line) +
                 ": partially filled vector");
  }
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cell(row, first + i, header, line);
  return v;
}

void append_vector(std::string& out, const std::optional<Vector>& v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out += ',';
    if (v) out += format_double((*v)[i]);
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                       std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return kNaN;
  double x = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::invalid_argument, "not a number: '" + text + "'");
  }
  return x;
}

std::string write_aci_trace_csv(const IterationTrace& trace) {
  const std::size_t n = trace.final_v.size();
  std::string out;
  for (std::size_t i = 0; i < kAciColumns.size(); ++i) {
    if (i) out += ',';
    out += kAciColumns[i];
  }
  for (const char* prefix : {"v", "w"})
    for (std::size_t i = 0; i < n; ++i) out += std::string(",") + prefix + "_" + std::to_string(i);
  out += '\n';

  for (const auto& r : trace.records) {
    out += std::to_string(r.k);
    for (double x : {r.norm_w_tilde, r.norm_v_tilde, r.alpha, r.beta, r.diff_v, r.diff_w}) {
      out += ',';
      out += format_double(x);
    }
    append_vector(out, r.v, n);
    append_vector(out, r.w, n);
    out += '\n';
  }
  out += std::to_string(trace.records.size());
  out += ",,,,,,";
  append_vector(out, trace.final_v, n);
  append_vector(out, trace.final_w, n);
  out += '\n';
  return out;
}

IterationTrace read_aci_trace_csv(const std::string& text) {
  const auto rows = split_lines(text);
  if (rows.empty()) schema_error("missing header");
  const auto& header = rows.front();
  const std::size_t n = check_header(header, kAciColumns, {"v", "w"});
  if (n == 0) schema_error("no vector columns");

  IterationTrace trace;
  bool terminal = false;
  for (std::size_t line = 1; line < rows.size(); ++line) {
    const auto& row = rows[line];
    if (terminal) schema_error("rows after the final row (line " + std::to_string(line) + ")");
    if (row.size() != header.size()) {
      schema_error("line " + std::to_string(line) + " has " + std::to_string(row.size()) +
                   " cells, expected " + std::to_string(header.size()));
    }
    const std::size_t k = index_cell(row, line);
    if (k != trace.records.size()) {
      schema_error("column 'k' line " + std::to_string(line) + ": expected " +
                   std::to_string(trace.records.size()));
    }
    const std::size_t v_col = kAciColumns.size();
    if (row[1].empty()) {
      auto v = vector_cells(row, v_col, n, header, line);
      auto w = vector_cells(row, v_col + n, n, header, line);
      if (!v || !w) schema_error("final row lacks the limit vectors");
      trace.final_v = std::move(*v);
      trace.final_w = std::move(*w);
      terminal = true;
      continue;
    }
    AciStepRecord rec;
    rec.k = k;
    rec.norm_w_tilde = cell(row, 1, header, line);
    rec.norm_v_tilde = cell(row, 2, header, line);
    rec.alpha = cell(row, 3, header, line);
    rec.beta = cell(row, 4, header, line);
    rec.diff_v = cell(row, 5, header, line);
    rec.diff_w = cell(row, 6, header, line);
    rec.v = vector_cells(row, v_col, n, header, line);
    rec.w = vector_cells(row, v_col + n, n, header, line);
    trace.records.push_back(std::move(rec));
  }
  if (!terminal || trace.records.empty()) {
    throw Error(ErrorKind::not_converged, "trace not converged: final row missing");
  }
  trace.tau_estimate = trace.records.back().norm_v_tilde;
  return trace;
}

std::string write_cg_trace_csv(const CgResult& result) {
  std::size_t n = 0;
  for (const auto& r : result.trace) {
    if (r.y) n = r.y->size();
  }
  std::string out;
  for (std::size_t i = 0; i < kCgColumns.size(); ++i) {
    if (i) out += ',';
    out += kCgColumns[i];
  }
  for (std::size_t i = 0; i < n; ++i) out += ",y_" + std::to_string(i);
  out += '\n';
  for (const auto& r : result.trace) {
    out += std::to_string(r.k);
    for (double x : {r.residual_norm, r.a_norm_error, r.diff_y2}) {
      out += ',';
      out += format_double(x);
    }
    append_vector(out, r.y, n);
    out += '\n';
  }
  return out;
}

CgResult read_cg_trace_csv(const std::string& text) {
  const auto rows = split_lines(text);
  if (rows.empty()) schema_error("missing header");
  const auto& header = rows.front();
  const std::size_t n = check_header(header, kCgColumns, {"y"});

  CgResult result;
  for (std::size_t line = 1; line < rows.size(); ++line) {
    const auto& row = rows[line];
    if (row.size() != header.size()) {
      schema_error("line " + std::to_string(line) + " has " + std::to_string(row.size()) +
                   " cells, expected " + std::to_string(header.size()));
    }
    CgStepRecord rec;
    rec.k = index_cell(row, line);
    if (rec.k != result.trace.size()) {
      schema_error("column 'k' line " + std::to_string(line) + ": expected " +
                   std::to_string(result.trace.size()));
    }
    rec.residual_norm = cell(row, 1, header, line);
    rec.a_norm_error = cell(row, 2, header, line);
    rec.diff_y2 = cell(row, 3, header, line);
    rec.y = vector_cells(row, kCgColumns.size(), n, header, line);
    result.trace.push_back(std::move(rec));
  }
  if (result.trace.empty()) schema_error("no rows");
  result.solution_error = result.trace.back().a_norm_error;
  const std::size_t count = result.trace.size();
  if (result.trace.back().y) result.final_y = *result.trace.back().y;
  if (count >= 2 && result.trace[count - 2].y) result.previous_y = *result.trace[count - 2].y;
  return result;
}

}  // namespace aci::cli
