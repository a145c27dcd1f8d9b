#include "acms/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace acms {

namespace {

/// Line/column (1-based) of the byte at offset `byte` in `text`.
std::pair<int, int> line_column(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  const size_t stop = std::min(byte, text.size());
  for (size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void schema_fail(const std::string& what, const std::string& detail) {
  throw SchemaError(what + ": " + detail);
}

const Json& require_member(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object()) schema_fail(what, "expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) schema_fail(what, std::string("missing member \"") + key + "\"");
  return *it;
}

int require_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    schema_fail(what, "expected an integer");
  return j.get<int>();
}

double require_number(const Json& j, const std::string& what) {
  if (!j.is_number()) schema_fail(what, "expected a number");
  return j.get<double>();
}

}  // namespace

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(msg), line_(line), column_(column) {}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const size_t off = e.byte > 0 ? static_cast<size_t>(e.byte) - 1 : 0;
    auto [line, col] = line_column(text, off);
    std::ostringstream msg;
    msg << "malformed JSON at line " << line << ", column " << col;
    throw ParseError(msg.str(), line, col);
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

// --- Low-level converters ----------------------------------------------------

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json tensor_entries_to_json(const Tensor3& t) {
  const int N = t.dim();
  Json out = Json::array();
  for (int i = 0; i < N; ++i) {
    Json plane = Json::array();
    for (int j = 0; j < N; ++j) {
      Json row = Json::array();
      for (int k = 0; k < N; ++k) row.push_back(t(i, j, k));
      plane.push_back(std::move(row));
    }
    out.push_back(std::move(plane));
  }
  return out;
}

Mat matrix_from_json(const Json& j, int rows, int cols, const std::string& what) {
  std::ostringstream shape;
  shape << "expected a " << rows << "x" << cols << " array of numbers";
  if (!j.is_array() || static_cast<int>(j.size()) != rows) schema_fail(what, shape.str());
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) schema_fail(what, shape.str());
    for (int k = 0; k < cols; ++k) {
      std::ostringstream slot;
      slot << what << "[" << i << "][" << k << "]";
      m(i, k) = require_number(row[k], slot.str());
    }
  }
  return m;
}

Vec vector_from_json(const Json& j, int size, const std::string& what) {
  std::ostringstream shape;
  shape << "expected an array of " << size << " numbers";
  if (!j.is_array() || static_cast<int>(j.size()) != size) schema_fail(what, shape.str());
  Vec v(size);
  for (int i = 0; i < size; ++i) {
    std::ostringstream slot;
    slot << what << "[" << i << "]";
    v[i] = require_number(j[i], slot.str());
  }
  return v;
}

Tensor3 tensor_entries_from_json(const Json& j, int N, const std::string& what) {
  std::ostringstream shape;
  shape << "expected a " << N << "x" << N << "x" << N << " nested array of numbers";
  if (!j.is_array() || static_cast<int>(j.size()) != N) schema_fail(what, shape.str());
  Tensor3 t(N);
  for (int i = 0; i < N; ++i) {
    const Json& plane = j[i];
    if (!plane.is_array() || static_cast<int>(plane.size()) != N) schema_fail(what, shape.str());
    for (int a = 0; a < N; ++a) {
      const Json& row = plane[a];
      if (!row.is_array() || static_cast<int>(row.size()) != N) schema_fail(what, shape.str());
      for (int b = 0; b < N; ++b) {
        std::ostringstream slot;
        slot << what << "[" << i << "][" << a << "][" << b << "]";
        t(i, a, b) = require_number(row[b], slot.str());
      }
    }
  }
  return t;
}

// --- Schema objects ------------------------------------------------------------

Structure structure_from_json(const Json& j, double tol) {
  const std::string what = "structure";
  const int n = require_int(require_member(j, "n", what), what + ".n");
  if (n < 1 || n > 16) schema_fail(what + ".n", "expected an integer in [1, 16]");
  const int N = 2 * n + 1;
  const Mat g = matrix_from_json(require_member(j, "g", what), N, N, what + ".g");
  const Mat phi = matrix_from_json(require_member(j, "phi", what), N, N, what + ".phi");
  const Vec xi = vector_from_json(require_member(j, "xi", what), N, what + ".xi");

  std::optional<Structure> s;
  if (j.contains("eta")) {
    const Vec eta = vector_from_json(j.at("eta"), N, what + ".eta");
    s.emplace(n, g, phi, xi, eta);
  } else {
    s.emplace(n, g, phi, xi);
  }

  const ValidationReport issues = validate_structure(*s, tol);
  if (!issues.empty()) {
    std::ostringstream msg;
    msg << what << ": axioms violated:";
    for (const auto& issue : issues) {
      msg << " [" << issue.identity << " (residual " << format_double(issue.residual) << ")]";
    }
    throw SchemaError(msg.str());
  }
  return *std::move(s);
}

Json structure_to_json(const Structure& s) {
  Json j = Json::object();
  j["n"] = s.n();
  j["g"] = matrix_to_json(s.g());
  j["phi"] = matrix_to_json(s.phi());
  j["xi"] = vector_to_json(s.xi());
  j["eta"] = vector_to_json(s.eta());
  return j;
}

Tensor3 cov_tensor_from_json(const Json& j, int N) {
  return tensor_entries_from_json(require_member(j, "entries", "alpha"), N, "alpha.entries");
}

Json cov_tensor_to_json(const Tensor3& t) {
  Json j = Json::object();
  j["entries"] = tensor_entries_to_json(t);
  return j;
}

LieAlgebraModel model_from_json(const Json& j, double tol) {
  const std::string what = "model";
  const int n = require_int(require_member(j, "n", what), what + ".n");
  if (n < 1 || n > 16) schema_fail(what + ".n", "expected an integer in [1, 16]");
  const int N = 2 * n + 1;

  Structure s = structure_from_json(require_member(j, "structure", what), tol);
  if (s.n() != n) schema_fail(what, "structure.n does not match top-level n");

  Tensor3 c(N);
  const Json& brackets = require_member(j, "brackets", what);
  if (!brackets.is_array()) schema_fail(what + ".brackets", "expected an array");
  for (size_t t = 0; t < brackets.size(); ++t) {
    std::ostringstream name;
    name << what << ".brackets[" << t << "]";
    const Json& entry = brackets[t];
    const int i = require_int(require_member(entry, "i", name.str()), name.str() + ".i");
    const int jj = require_int(require_member(entry, "j", name.str()), name.str() + ".j");
    if (i < 0 || i >= N || jj < 0 || jj >= N)
      schema_fail(name.str(), "basis indices must lie in [0, 2n]");
    if (i == jj) schema_fail(name.str(), "bracket of a basis vector with itself");
    const Json& coeffs = require_member(entry, "coeffs", name.str());
    if (!coeffs.is_object()) schema_fail(name.str() + ".coeffs", "expected an object");
    for (auto it = coeffs.begin(); it != coeffs.end(); ++it) {
      char* end = nullptr;
      const long k = std::strtol(it.key().c_str(), &end, 10);
      if (end == it.key().c_str() || *end != '\0' || k < 0 || k >= N)
        schema_fail(name.str() + ".coeffs", "key \"" + it.key() + "\" is not a basis index");
      const double v = require_number(it.value(), name.str() + ".coeffs[\"" + it.key() + "\"]");
      c(i, jj, static_cast<int>(k)) += v;
      c(jj, i, static_cast<int>(k)) -= v;
    }
  }

  LieAlgebraModel m("input", std::move(s), std::move(c));
  try {
    validate_model(m, std::max(tol, 1e-9));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("model: ") + e.what());
  }
  return m;
}

Json model_to_json(const LieAlgebraModel& m) {
  const int N = m.s.N();
  Json brackets = Json::array();
  for (int i = 0; i < N; ++i) {
    for (int jj = i + 1; jj < N; ++jj) {
      Json coeffs = Json::object();
      for (int k = 0; k < N; ++k) {
        if (m.c(i, jj, k) != 0.0) coeffs[std::to_string(k)] = m.c(i, jj, k);
      }
      if (!coeffs.empty()) {
        Json entry = Json::object();
        entry["i"] = i;
        entry["j"] = jj;
        entry["coeffs"] = std::move(coeffs);
        brackets.push_back(std::move(entry));
      }
    }
  }
  Json j = Json::object();
  j["n"] = m.s.n();
  j["brackets"] = std::move(brackets);
  j["structure"] = structure_to_json(m.s);
  return j;
}

InputData input_from_json(const Json& j, double tol) {
  if (!j.is_object()) throw SchemaError("input: expected a JSON object");
  InputData in;
  if (j.contains("brackets")) {
    in.model = model_from_json(j, tol);
    in.structure = in.model->s;
    in.alpha = nabla_Phi(*in.model);
    return in;
  }
  if (j.contains("structure")) {
    in.structure = structure_from_json(j.at("structure"), tol);
    const int N = in.structure->N();
    if (j.contains("alpha")) {
      in.alpha = cov_tensor_from_json(j.at("alpha"), N);
      const double res = cv_membership_residual(in.alpha, *in.structure);
      if (res > std::max(tol, 1e-7)) {
        std::ostringstream msg;
        msg << "alpha: not a compatible covariant tensor (symmetry residual "
            << format_double(res) << ")";
        throw SchemaError(msg.str());
      }
    } else {
      in.alpha = Tensor3(N);
    }
    return in;
  }
  if (j.contains("g") && j.contains("phi") && j.contains("xi")) {
    in.structure = structure_from_json(j, tol);
    in.alpha = Tensor3(in.structure->N());
    return in;
  }
  throw SchemaError(
      "input: expected a Lie-algebra model (\"brackets\"), a "
      "{\"structure\", \"alpha\"} pair, or a bare structure object");
}

// --- Report serializers -------------------------------------------------------

Json intrinsic_to_json(const IntrinsicData& d) {
  Json j = Json::object();
  j["S"] = matrix_to_json(d.S);
  j["h"] = matrix_to_json(d.h);
  j["P"] = matrix_to_json(d.P);
  return j;
}

Json endo_profile_to_json(const EndoProfile& p) {
  Json j = Json::object();
  j["symmetric"] = p.symmetric;
  j["skew"] = p.skew;
  j["commutes_phi"] = p.commutes_phi;
  j["anticommutes_phi"] = p.anticommutes_phi;
  j["vanishes_on_H"] = p.vanishes_on_H;
  j["kills_xi"] = p.kills_xi;
  j["r_symmetric"] = p.r_symmetric;
  j["r_skew"] = p.r_skew;
  j["r_commutes_phi"] = p.r_commutes_phi;
  j["r_anticommutes_phi"] = p.r_anticommutes_phi;
  j["r_vanishes_on_H"] = p.r_vanishes_on_H;
  j["r_kills_xi"] = p.r_kills_xi;
  j["trace"] = p.trace;
  j["trace_phi"] = p.trace_phi;
  return j;
}

Json classification_to_json(const ClassificationReport& r) {
  Json norms = Json::object();
  for (int i = 1; i <= 12; ++i) {
    const std::string key = "C" + std::to_string(i);
    auto it = r.component_norms.find(key);
    norms[key] = it == r.component_norms.end() ? 0.0 : it->second;
  }
  Json j = Json::object();
  j["component_norms"] = std::move(norms);
  j["hparallel_label"] = r.hparallel_label;
  j["d1_label"] = r.d1_label;
  j["marginal_branches"] = r.marginal_branches;
  j["agreement"] = r.agreement;
  j["full_label"] = r.full_label;
  j["parseval_residual"] = r.parseval_residual;
  j["cv_residual"] = r.cv_residual;
  j["intrinsic"] = intrinsic_to_json(r.intrinsic);
  return j;
}

Json predicates_to_json(const PredicateReport& r) {
  Json j = Json::object();
  for (const auto& e : r.entries) {
    Json entry = Json::object();
    entry["value"] = e.value;
    entry["residual_criterion"] = e.residual_criterion;
    entry["residual_definition"] = e.residual_definition;
    entry["routes_agree"] = e.routes_agree;
    j[e.name] = std::move(entry);
  }
  j["all_agree"] = r.all_agree;
  return j;
}

Json connection_report_to_json(const Tensor3& A, const Tensor3& T,
                               const AdaptedReport& adapted,
                               const TorsionTypes& types,
                               const CharacteristicReport& characteristic,
                               const ParallelTorsionReport* parallel_torsion) {
  Json j = Json::object();
  j["A"] = tensor_entries_to_json(A);
  j["T"] = tensor_entries_to_json(T);

  Json tn = Json::object();
  tn["A1"] = types.n1;
  tn["A2"] = types.n2;
  tn["A3"] = types.n3;
  j["type_norms"] = std::move(tn);

  Json ad = Json::object();
  ad["metric"] = adapted.metric;
  ad["phi"] = adapted.phi;
  ad["xi"] = adapted.xi;
  ad["minimality"] = adapted.minimality;
  j["adapted"] = std::move(ad);

  Json ch = Json::object();
  ch["exists"] = characteristic.exists;
  Json crit = Json::object();
  crit["killing_residual"] = characteristic.killing_residual;
  crit["nijenhuis_skew_residual"] = characteristic.nijenhuis_skew_residual;
  crit["class_residual"] = characteristic.class_residual;
  crit["endo_h_parallel_residual"] = characteristic.endo_h_parallel_residual;
  crit["routes_agree"] = characteristic.routes_agree;
  ch["criteria"] = std::move(crit);
  ch["T"] = characteristic.exists ? tensor_entries_to_json(characteristic.T) : Json(nullptr);
  j["characteristic"] = std::move(ch);

  if (parallel_torsion != nullptr) {
    Json pt = Json::object();
    pt["i"] = parallel_torsion->res_i;
    pt["ii"] = parallel_torsion->res_ii;
    pt["iii"] = parallel_torsion->res_iii;
    j["parallel_torsion"] = std::move(pt);
  }
  return j;
}

// --- Deterministic writer -------------------------------------------------------

std::string format_double(double v) {
  if (std::isnan(v) || std::isinf(v)) return "null";
  char buf[64];
  for (int prec = 1; prec <= 12; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string out(buf);
  if (out.find_first_of(".eE") == std::string::npos) out += ".0";
  return out;
}

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void render_scalar(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    case Json::value_t::string:
      out += Json(j.get<std::string>()).dump();
      break;
    default:
      // integers, booleans, null: nlohmann's emission is already canonical
      out += j.dump();
      break;
  }
}

void render(const Json& j, int depth, std::string& out) {
  const std::string pad(2 * static_cast<size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<size_t>(depth + 1), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad_in;
      out += Json(it.key()).dump();
      out += ": ";
      render(it.value(), depth + 1, out);
    }
    out += "\n";
    out += pad;
    out += "}";
    return;
  }
  if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    bool all_scalar = true;
    for (const auto& e : j) {
      if (!is_scalar(e)) {
        all_scalar = false;
        break;
      }
    }
    if (all_scalar) {
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ", ";
        first = false;
        render_scalar(e, out);
      }
      out += "]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += ",\n";
      first = false;
      out += pad_in;
      render(e, depth + 1, out);
    }
    out += "\n";
    out += pad;
    out += "]";
    return;
  }
  render_scalar(j, out);
}

}  // namespace

std::string dump_deterministic(const Json& j) {
  std::string out;
  render(j, 0, out);
  out += "\n";
  return out;
}

}  // namespace acms
