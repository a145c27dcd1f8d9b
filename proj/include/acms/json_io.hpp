#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "acms/classify.hpp"
#include "acms/connections.hpp"
#include "acms/geometry.hpp"
#include "acms/intrinsic.hpp"
#include "acms/structure.hpp"
#include "acms/tensor3.hpp"

#include "json.hpp"

namespace acms {

/// Ordered JSON document: object members keep insertion order, which is what
/// makes the serialized output deterministic.
using Json = nlohmann::ordered_json;

/// Raised when input text is not syntactically valid JSON. Carries the
/// 1-based line and column of the first offending byte (CLI exit code 1).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_ = 0, column_ = 0;
};

/// Raised when the JSON is well-formed but violates the input schema or the
/// structure/model axioms (CLI exit code 2).
class SchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses JSON text; ParseError on malformed input.
Json parse_text(const std::string& text);
/// Reads and parses a file; SchemaError when unreadable, ParseError on syntax.
Json load_json_file(const std::string& path);

// --- Low-level converters ----------------------------------------------------

Json matrix_to_json(const Mat& m);
Json vector_to_json(const Vec& v);
/// Nested N x N x N array-of-arrays, t(i,j,k) = entries[i][j][k].
Json tensor_entries_to_json(const Tensor3& t);

Mat matrix_from_json(const Json& j, int rows, int cols, const std::string& what);
Vec vector_from_json(const Json& j, int size, const std::string& what);
Tensor3 tensor_entries_from_json(const Json& j, int N, const std::string& what);

// --- Schema objects ------------------------------------------------------------
//
// Structure:        {"n": int, "g": [[...]], "phi": [[...]], "xi": [...],
//                    "eta": [...] (optional; recomputed from g, xi if absent)}
// Covariant tensor: {"entries": [[[...]]]}  (N x N x N, all slots 0-based)
// Lie-algebra model:{"n": int,
//                    "brackets": [{"i": int, "j": int,
//                                  "coeffs": {"<k>": value, ...}}, ...],
//                    "structure": {...}}
//   brackets lists [e_i, e_j] = sum_k coeffs[k] e_k for i < j; the i > j
//   values follow by antisymmetry and unlisted pairs commute.

/// Validates every structure axiom at tolerance tol; SchemaError on failure.
Structure structure_from_json(const Json& j, double tol);
Json structure_to_json(const Structure& s);

Tensor3 cov_tensor_from_json(const Json& j, int N);
Json cov_tensor_to_json(const Tensor3& t);

/// Validates bracket antisymmetry, the Jacobi identity, and the embedded
/// structure; SchemaError on failure.
LieAlgebraModel model_from_json(const Json& j, double tol);
Json model_to_json(const LieAlgebraModel& m);

/// A classify/connection input document is one of
///   * a Lie-algebra model (detected by a "brackets" member),
///   * {"structure": {...}, "alpha": {"entries": ...}} (alpha optional, zero
///     when absent),
///   * a bare structure object ("g"/"phi"/"xi" at top level), alpha = 0.
struct InputData {
  std::optional<LieAlgebraModel> model;   // engaged for model documents
  std::optional<Structure> structure;     // always engaged
  Tensor3 alpha;                          // pointwise tensor (zero if absent)
  bool is_model() const { return model.has_value(); }
};
InputData input_from_json(const Json& j, double tol);

// --- Report serializers -------------------------------------------------------

Json intrinsic_to_json(const IntrinsicData& d);
Json endo_profile_to_json(const EndoProfile& p);
Json classification_to_json(const ClassificationReport& r);
Json predicates_to_json(const PredicateReport& r);

/// Connection report:
///   {"A": [[[...]]], "T": [[[...]]],
///    "type_norms": {"A1": _, "A2": _, "A3": _},
///    "adapted": {...residuals...},
///    "characteristic": {"exists": bool, "criteria": {...}, "T": ... | null},
///    "parallel_torsion": {"i": _, "ii": _, "iii": _}}   (models only)
Json connection_report_to_json(const Tensor3& A, const Tensor3& T,
                               const AdaptedReport& adapted,
                               const TorsionTypes& types,
                               const CharacteristicReport& characteristic,
                               const ParallelTorsionReport* parallel_torsion);

// --- Deterministic writer -------------------------------------------------------

/// Shortest decimal representation that round-trips to the same double,
/// capped at 12 significant digits; integral values keep a trailing ".0".
std::string format_double(double v);

/// Renders a document byte-identically across runs and platforms: members in
/// insertion order, two-space indentation, scalar-only arrays inlined, and
/// doubles through format_double. Ends with a newline.
std::string dump_deterministic(const Json& j);

}  // namespace acms
