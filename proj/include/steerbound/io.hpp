#pragma once

// File formats.
//
// Functional JSON:
//   {"matrices": [M_11, M_12, ..., M_nm], "meta": {"d", "kind", "m", "n", "seed", "version"}}
// Matrices are setting-major (x * m + a), each a row-major list of rows, each
// entry a two-element array [re, im]. Keys are emitted in sorted order and
// floating-point numbers with 17 significant digits, so load followed by save
// reproduces the input byte for byte.
//
// Sweep CSV columns (always with header):
//   parameter,s_lhs_exact,s_lhs_analytic,s_q,violation,paper_lower_bound,runtime_ms

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "config.hpp"
#include "error.hpp"
#include "functionals.hpp"

namespace steerbound::io {

using nlohmann::json;

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

inline bool is_inline(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (e.is_object()) return false;
    if (e.is_array()) {
      for (const auto& f : e) {
        if (!is_scalar(f)) return false;
      }
    }
  }
  return true;
}

inline void emit(const json& j, std::string& out, int indent);

inline void emit_inline(const json& j, std::string& out) {
  out += '[';
  bool first = true;
  for (const auto& e : j) {
    if (!first) out += ',';
    first = false;
    if (e.is_array()) {
      emit_inline(e, out);
    } else {
      emit(e, out, 0);
    }
  }
  out += ']';
}

inline void emit(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (is_inline(j)) {
        emit_inline(j, out);
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        emit(e, out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

// Sorted keys, 17-significant-digit floats, inline numeric rows, trailing newline.
inline std::string dump_canonical(const json& j) {
  std::string out;
  detail::emit(j, out, 0);
  out += '\n';
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::precondition, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::precondition, "cannot write '" + path + "'");
  out << content;
}

// --- functionals -----------------------------------------------------------

struct FunctionalDocument {
  SteeringFunctional functional;
  std::string version = kVersion;
};

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json functional_to_json(const FunctionalDocument& doc) {
  const auto& f = doc.functional;
  json matrices = json::array();
  for (const auto& e : f.entries) matrices.push_back(matrix_to_json(e));
  json meta = {{"kind", std::string(to_string(f.kind))},
               {"d", f.dimension},
               {"n", f.settings},
               {"m", f.outcomes},
               {"seed", f.seed ? json(*f.seed) : json(nullptr)},
               {"version", doc.version}};
  return {{"meta", meta}, {"matrices", matrices}};
}

inline std::string serialize_functional(const FunctionalDocument& doc) { return dump_canonical(functional_to_json(doc)); }

namespace detail {

[[noreturn]] inline void schema(const std::string& what) { fail(ErrorKind::parse, "functional schema: " + what); }

inline void require_keys(const json& obj, const std::set<std::string>& keys, const std::string& where) {
  if (!obj.is_object()) schema(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!keys.count(it.key())) schema("unknown field '" + it.key() + "' in " + where);
  }
  for (const auto& k : keys) {
    if (!obj.contains(k)) schema("missing field '" + k + "' in " + where);
  }
}

inline int positive_int(const json& j, const std::string& name) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > kMaxDimension * 16LL) {
    schema("'" + name + "' must be a positive integer");
  }
  return j.get<int>();
}

inline double number(const json& j) {
  if (!j.is_number()) schema("matrix entries must be numbers");
  return j.get<double>();
}

}  // namespace detail

inline FunctionalDocument functional_from_json(const json& j) {
  detail::require_keys(j, {"meta", "matrices"}, "document");
  const json& meta = j.at("meta");
  detail::require_keys(meta, {"kind", "d", "n", "m", "seed", "version"}, "meta");
  if (!meta.at("kind").is_string()) detail::schema("'kind' must be a string");
  const auto kind = parse_kind(meta.at("kind").get<std::string>());
  if (!kind) detail::schema("unknown kind '" + meta.at("kind").get<std::string>() + "'");
  const int d = detail::positive_int(meta.at("d"), "d");
  const int n = detail::positive_int(meta.at("n"), "n");
  const int m = detail::positive_int(meta.at("m"), "m");
  std::optional<std::uint64_t> seed;
  if (!meta.at("seed").is_null()) {
    if (!meta.at("seed").is_number_unsigned() && !meta.at("seed").is_number_integer()) {
      detail::schema("'seed' must be an unsigned integer or null");
    }
    if (meta.at("seed").is_number_integer() && !meta.at("seed").is_number_unsigned() && meta.at("seed").get<long long>() < 0) {
      detail::schema("'seed' must be non-negative");
    }
    seed = meta.at("seed").get<std::uint64_t>();
  }
  if (!meta.at("version").is_string()) detail::schema("'version' must be a string");

  const json& mats = j.at("matrices");
  if (!mats.is_array() || mats.size() != static_cast<std::size_t>(n) * m) {
    detail::schema("'matrices' must hold n*m = " + std::to_string(n * m) + " matrices");
  }
  std::vector<ComplexMatrix> coeffs;
  for (const auto& mj : mats) {
    if (!mj.is_array() || mj.size() != static_cast<std::size_t>(d)) detail::schema("each matrix must have d rows");
    ComplexMatrix mat(d, d);
    for (int r = 0; r < d; ++r) {
      const json& row = mj[static_cast<std::size_t>(r)];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(d)) detail::schema("each row must have d entries");
      for (int c = 0; c < d; ++c) {
        const json& z = row[static_cast<std::size_t>(c)];
        if (!z.is_array() || z.size() != 2) detail::schema("complex entries must be [re, im]");
        mat(r, c) = Complex(detail::number(z[0]), detail::number(z[1]));
      }
    }
    coeffs.push_back(std::move(mat));
  }
  FunctionalDocument doc;
  doc.functional = make_functional(*kind, n, m, d, std::move(coeffs), seed);
  doc.version = meta.at("version").get<std::string>();
  return doc;
}

inline FunctionalDocument parse_functional(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, std::string("functional JSON parse error: ") + e.what());
  }
  return functional_from_json(j);
}

inline FunctionalDocument load_functional(const std::string& path) { return parse_functional(read_file(path)); }

// --- bounds report ---------------------------------------------------------

inline json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

inline json checks_to_json(const std::vector<BoundCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"formula", c.formula}, {"value", c.value}, {"holds", c.holds}});
  }
  return out;
}

// Everything except "diagnostics" is a deterministic function of the input
// and the numeric options.
inline json report_to_json(const BoundsReport& r, const SeesawOptions& seesaw_opt = {}) {
  json witness = json::array();
  for (int a : r.lhs.witness.assignments) witness.push_back(a + 1);
  json seesaw = nullptr;
  if (r.quantum.seesaw) {
    const auto& s = *r.quantum.seesaw;
    seesaw = {{"value", s.value},
              {"converged", s.converged},
              {"monotone", s.monotone},
              {"best_run", s.best_run},
              {"iterations", s.iterations},
              {"total_iterations", s.total_iterations},
              {"restarts", seesaw_opt.restarts},
              {"max_iters", seesaw_opt.max_iters},
              {"tol", seesaw_opt.tol},
              {"seed", seesaw_opt.seed}};
  }
  return {
      {"functional",
       {{"kind", std::string(to_string(r.kind))},
        {"n", r.settings},
        {"m", r.outcomes},
        {"d", r.dimension},
        {"seed", r.seed ? json(*r.seed) : json(nullptr)}}},
      {"s_lhs_exact", r.lhs.value},
      {"s_lhs_method", r.lhs.method},
      {"witness", witness},
      {"strategies", r.lhs.strategies},
      {"s_lhs_analytic", checks_to_json(r.lhs_analytic)},
      {"s_q",
       {{"value", r.quantum.value},
        {"method", r.quantum.method},
        {"canonical_value", optional_number(r.quantum.canonical_value)},
        {"upper", r.quantum.upper},
        {"seesaw", seesaw}}},
      {"violation", optional_number(r.violation)},
      {"violation_lower_bounds", checks_to_json(r.violation_lower)},
      {"checks", {{"quantum_within_upper", r.quantum_within_upper}, {"all_passed", r.all_passed}}},
      {"diagnostics", {{"elapsed_ms", r.diagnostics.elapsed_ms}, {"threads", r.diagnostics.threads}, {"version", kVersion}}},
  };
}

// --- sweep rows ------------------------------------------------------------

struct SweepRow {
  int parameter = 0;
  double s_lhs_exact = 0.0;
  double s_lhs_analytic = 0.0;     // tightest applicable analytic bound
  double s_q = 0.0;
  double violation = 0.0;
  double paper_lower_bound = 0.0;  // largest applicable lower bound on the violation
  double runtime_ms = 0.0;
};

inline constexpr const char* kSweepHeader =
    "parameter,s_lhs_exact,s_lhs_analytic,s_q,violation,paper_lower_bound,runtime_ms";

// Non-finite values (no applicable bound) are written as empty fields.
inline std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

inline std::string sweep_row_csv(const SweepRow& r) {
  std::ostringstream os;
  os << r.parameter << ',' << csv_number(r.s_lhs_exact) << ',' << csv_number(r.s_lhs_analytic) << ','
     << csv_number(r.s_q) << ',' << csv_number(r.violation) << ',' << csv_number(r.paper_lower_bound) << ','
     << csv_number(r.runtime_ms);
  return os.str();
}

inline json sweep_row_json(const SweepRow& r) {
  const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"parameter", r.parameter},
          {"s_lhs_exact", num(r.s_lhs_exact)},
          {"s_lhs_analytic", num(r.s_lhs_analytic)},
          {"s_q", num(r.s_q)},
          {"violation", num(r.violation)},
          {"paper_lower_bound", num(r.paper_lower_bound)},
          {"runtime_ms", num(r.runtime_ms)}};
}

}  // namespace steerbound::io
