#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "aci/error.hpp"
#include "json.hpp"

namespace aci::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::invalid_argument, "config: " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.contains(key)) config_error("unknown field '" + where + key + "'");
  }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where = "") {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    config_error("field '" + where + key + "' has the wrong type");
  }
}

const json& object_field(const json& obj, const char* key) {
  const json& sub = obj.at(key);
  if (!sub.is_object()) config_error(std::string("field '") + key + "' must be an object");
  return sub;
}

Matrix matrix_from_rows(const json& rows) {
  if (!rows.is_array() || rows.empty()) config_error("matrix must be a nonempty array of rows");
  const std::size_t n = rows.size();
  std::vector<double> entries;
  entries.reserve(n * n);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) config_error("matrix must be square");
    for (const auto& x : row) {
      if (!x.is_number()) config_error("matrix entries must be numbers");
      entries.push_back(x.get<double>());
    }
  }
  return Matrix(n, std::move(entries));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Matrix parse_matrix_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed matrix JSON: ") + e.what());
  }
  if (doc.is_object()) {
    reject_unknown(doc, {"rows"}, "matrix.");
    if (!doc.contains("rows")) config_error("matrix file lacks field 'rows'");
    return matrix_from_rows(doc.at("rows"));
  }
  return matrix_from_rows(doc);
}

void RunConfig::validate() const {
  if (spec.has_value() == matrix.has_value()) {
    config_error("exactly one of 'spec', 'matrix' or 'matrix_file' is required");
  }
  if (s == 0) config_error("'s' must be >= 1");
  iteration.validate();
  if (!(support_tol > 0.0)) config_error("'support_tol' must be > 0");
  if (sweep_starts == 0) config_error("'sweep.starts' must be >= 1");

  const std::optional<SpectrumKind> kind =
      spec ? std::optional<SpectrumKind>(spec->kind) : std::nullopt;
  switch (algorithm) {
    case Algorithm::aci:
      break;
    case Algorithm::aci_symmetric:
      if (kind ? kind == SpectrumKind::orthogonal : !matrix->is_symmetric()) {
        config_error("algorithm 'aci_symmetric' requires a symmetric matrix");
      }
      break;
    case Algorithm::aci1_orthogonal:
      if (kind ? kind != SpectrumKind::orthogonal : !matrix->is_orthogonal()) {
        config_error("algorithm 'aci1_orthogonal' requires an orthogonal matrix");
      }
      if (s != 1) config_error("algorithm 'aci1_orthogonal' requires s = 1");
      break;
    case Algorithm::cg:
      if (kind ? kind == SpectrumKind::orthogonal : !matrix->is_symmetric()) {
        config_error("algorithm 'cg' requires a symmetric positive definite matrix");
      }
      break;
  }
  const std::size_t n = spec ? spec->dimension() : matrix->size();
  if (start.vector && start.vector->size() != n) {
    config_error("'start.vector' has the wrong dimension");
  }
  if (cg.rhs && cg.rhs->size() != n) config_error("'cg.rhs' has the wrong dimension");
}

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("expected a JSON object");
  reject_unknown(doc,
                 {"spec", "matrix", "matrix_file", "algorithm", "s", "start", "iteration", "cg",
                  "support_tol", "sweep", "outputs"},
                 "");

  RunConfig cfg;
  if (doc.contains("spec")) cfg.spec = spectrum_from_json(object_field(doc, "spec").dump());
  if (doc.contains("matrix")) cfg.matrix = matrix_from_rows(doc.at("matrix"));
  if (doc.contains("matrix_file")) {
    if (cfg.matrix) config_error("'matrix' and 'matrix_file' are mutually exclusive");
    const std::filesystem::path p = field<std::string>(doc, "matrix_file");
    cfg.matrix = parse_matrix_json(read_file((std::filesystem::path(base_dir) / p).string()));
  }
  if (!doc.contains("algorithm")) config_error("missing field 'algorithm'");
  cfg.algorithm = algorithm_from_string(field<std::string>(doc, "algorithm"));
  if (doc.contains("s")) cfg.s = field<std::size_t>(doc, "s");

  if (doc.contains("start")) {
    const json& st = object_field(doc, "start");
    reject_unknown(st, {"seed", "vector", "min_grade", "nonzero_blocks"}, "start.");
    if (st.contains("seed")) cfg.start.seed = field<std::uint64_t>(st, "seed", "start.");
    if (st.contains("vector")) {
      cfg.start.vector = field<std::vector<double>>(st, "vector", "start.");
    }
    if (st.contains("min_grade")) {
      cfg.start.min_grade = field<std::size_t>(st, "min_grade", "start.");
    }
    if (st.contains("nonzero_blocks")) {
      cfg.start.nonzero_blocks = field<std::vector<std::size_t>>(st, "nonzero_blocks", "start.");
    }
    if (cfg.start.seed && cfg.start.vector) {
      config_error("'start.seed' and 'start.vector' are mutually exclusive");
    }
  }

  if (doc.contains("iteration")) {
    const json& it = object_field(doc, "iteration");
    reject_unknown(it, {"max_steps", "diff_tol", "record_vectors", "seed"}, "iteration.");
    if (it.contains("max_steps")) {
      cfg.iteration.max_steps = field<std::size_t>(it, "max_steps", "iteration.");
    }
    if (it.contains("diff_tol")) cfg.iteration.diff_tol = field<double>(it, "diff_tol", "iteration.");
    if (it.contains("record_vectors")) {
      cfg.iteration.record_vectors = field<bool>(it, "record_vectors", "iteration.");
    }
    if (it.contains("seed")) cfg.iteration.seed = field<std::uint64_t>(it, "seed", "iteration.");
  }

  if (doc.contains("cg")) {
    const json& cg = object_field(doc, "cg");
    reject_unknown(cg, {"rhs", "residual_rtol"}, "cg.");
    if (cg.contains("rhs")) cfg.cg.rhs = field<std::vector<double>>(cg, "rhs", "cg.");
    if (cg.contains("residual_rtol") && !cg.at("residual_rtol").is_null()) {
      cfg.cg.residual_rtol = field<double>(cg, "residual_rtol", "cg.");
    }
  }

  if (doc.contains("support_tol")) cfg.support_tol = field<double>(doc, "support_tol");
  if (doc.contains("sweep")) {
    const json& sw = object_field(doc, "sweep");
    reject_unknown(sw, {"starts"}, "sweep.");
    if (sw.contains("starts")) cfg.sweep_starts = field<std::size_t>(sw, "starts", "sweep.");
  }
  if (doc.contains("outputs")) {
    const json& out = object_field(doc, "outputs");
    reject_unknown(out, {"trace", "report", "manifest"}, "outputs.");
    if (out.contains("trace")) cfg.trace_path = field<std::string>(out, "trace", "outputs.");
    if (out.contains("report")) cfg.report_path = field<std::string>(out, "report", "outputs.");
    if (out.contains("manifest")) {
      cfg.manifest_path = field<std::string>(out, "manifest", "outputs.");
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_run_config(read_file(path), dir.empty() ? "." : dir);
}

}  // namespace aci::cli
