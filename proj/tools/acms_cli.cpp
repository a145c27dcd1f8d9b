/// Command-line surface for the almost-contact classification library:
/// ingest structures or Lie-algebra models (JSON or the built-in example
/// catalog), classify, project onto class subspaces, print dimension tables,
/// analyze adapted connections, and run the invariant selftest battery.
///
/// Exit codes: 0 success, 1 malformed JSON (line/column reported on stderr),
/// 2 validation failure (schema, axioms, or configuration), 3 internal
/// inconsistency (independent computation routes disagree).

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "acms/classify.hpp"
#include "acms/connections.hpp"
#include "acms/cv_space.hpp"
#include "acms/geometry.hpp"
#include "acms/intrinsic.hpp"
#include "acms/json_io.hpp"
#include "acms/selftest.hpp"
#include "acms/structure.hpp"

namespace {

using namespace acms;

constexpr const char* kCokahler = "cok\xc3\xa4hler";  // "cokähler" (UTF-8)

struct Options {
  std::string input;
  std::string example;
  int n = 1;
  std::string lambda_csv;
  double alpha = 1.0;
  double delta = 1.0;
  double tolerance = 0.0;  // 0 = not given
  std::string format = "text";
  std::uint64_t seed = 2024;

  bool tol_given() const { return tolerance > 0.0; }
  /// Tolerance for schema/axiom validation.
  double validation_tol() const { return tol_given() ? tolerance : default_tolerance(); }
  /// Threshold for class-membership decisions (looser by default: deciding
  /// that a component is absent is a coarser statement than a consistency
  /// residual).
  double class_tol() const {
    return tol_given() ? tolerance : std::max(default_tolerance(), 1e-7);
  }
};

void add_common_flags(CLI::App* cmd, Options& o, bool with_input) {
  if (with_input) {
    cmd->add_option("--input", o.input, "Input JSON file (structure, structure+alpha pair, or Lie-algebra model)");
    cmd->add_option("--example", o.example, "Built-in example name (see the `examples` command)");
  }
  cmd->add_option("--n", o.n, "Rank parameter n (the space is R^(2n+1))");
  cmd->add_option("--lambda", o.lambda_csv, "Comma-separated lambda values for the heisenberg example");
  cmd->add_option("--alpha", o.alpha, "alpha parameter of the three-alpha-delta example");
  cmd->add_option("--delta", o.delta, "delta parameter of the three-alpha-delta example");
  cmd->add_option("--tolerance", o.tolerance, "Relative tolerance override (default 1e-9, env ACMS_TOLERANCE)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", o.format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--seed", o.seed, "Seed for the randomized examples");
}

std::vector<double> parse_lambda(const std::string& csv, int n) {
  if (csv.empty()) return std::vector<double>(static_cast<size_t>(n), 1.0);
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw SchemaError("--lambda: \"" + item + "\" is not a number");
    }
  }
  if (static_cast<int>(out.size()) != n)
    throw SchemaError("--lambda: expected " + std::to_string(n) + " comma-separated values");
  return out;
}

void check_n(int n, int max_n) {
  if (n < 1 || n > max_n)
    throw SchemaError("--n: expected an integer in [1, " + std::to_string(max_n) + "]");
}

/// Resolved input: one or more (structure, alpha) items, plus the Lie-algebra
/// model they came from when there is one (enables the bracket-level
/// computation routes and the parallel-torsion checks).
struct ResolvedInput {
  std::string title;
  std::vector<std::string> item_names;  // parallel to items; empty for single
  std::vector<std::pair<Structure, Tensor3>> items;
  std::optional<LieAlgebraModel> model;
};

const std::vector<std::pair<const char*, const char*>>& example_catalog() {
  static const std::vector<std::pair<const char*, const char*>> catalog = {
      {"zero", "canonical structure with alpha = 0 (--n)"},
      {"heisenberg", "Heisenberg-group model, label C6 / C6+C7 (--n, --lambda)"},
      {"abelian", "abelian Lie algebra, alpha = 0 (--n)"},
      {"random-lie", "random central-extension or almost-abelian Lie model (--n, --seed)"},
      {"random-tensor", "random compatible tensor on a random structure (--n, --seed)"},
      {"three-alpha-delta", "dimension-7 triple of structures; C6 iff alpha = delta (--alpha, --delta)"},
      {"contact-metric", "synthetic C6+C9 tensor (--n, --seed)"},
      {"nearly-sasakian", "synthetic C6+C10+C11 tensor (--n >= 2, --seed)"},
      {"nearly-cosymplectic", "synthetic C10+C11 tensor (--n >= 2, --seed)"},
      {"almost-cokahler", "synthetic C9 tensor (--n, --seed)"},
      {"almost-kenmotsu", "synthetic C5+C9 tensor (--n, --seed)"},
  };
  return catalog;
}

ResolvedInput resolve_example(const Options& o) {
  ResolvedInput r;
  const std::string& name = o.example;
  std::ostringstream title;
  title << name;
  if (name == "three-alpha-delta") {
    title << " (alpha=" << format_double(o.alpha) << ", delta=" << format_double(o.delta) << ")";
    ThreeAlphaDeltaModel m = three_alpha_delta_point_model(o.alpha, o.delta);
    for (int i = 0; i < 3; ++i) {
      r.item_names.push_back("structure " + std::to_string(i + 1));
      r.items.emplace_back(m.structures[static_cast<size_t>(i)], m.alpha[static_cast<size_t>(i)]);
    }
    r.title = title.str();
    return r;
  }

  check_n(o.n, 4);
  title << " (n=" << o.n << ")";
  r.title = title.str();
  if (name == "zero") {
    Structure s = canonical_structure(o.n);
    r.items.emplace_back(s, Tensor3(s.N()));
    return r;
  }
  if (name == "heisenberg") {
    const std::vector<double> lv = parse_lambda(o.lambda_csv, o.n);
    Vec lam(o.n);
    for (int i = 0; i < o.n; ++i) lam[i] = lv[static_cast<size_t>(i)];
    r.model = heisenberg_model(o.n, lam);
  } else if (name == "abelian") {
    r.model = abelian_model(o.n);
  } else if (name == "random-lie") {
    r.model = random_lie_model(o.n, o.seed, RandomModelKind::Mixed);
  } else if (name == "random-tensor") {
    Structure s = random_structure(o.n, o.seed);
    Tensor3 a = random_cv_tensor(s, o.seed + 1);
    r.items.emplace_back(std::move(s), std::move(a));
    return r;
  } else if (name == "nearly-sasakian" || name == "nearly-cosymplectic") {
    if (o.n < 2) throw SchemaError("--example " + name + ": needs --n >= 2");
    Structure s = canonical_structure(o.n);
    r.items.emplace_back(s, synthetic_example(name, s, o.seed));
    return r;
  } else if (name == "contact-metric" || name == "almost-cokahler" ||
             name == "almost-kenmotsu") {
    Structure s = canonical_structure(o.n);
    r.items.emplace_back(s, synthetic_example(name, s, o.seed));
    return r;
  } else {
    std::ostringstream msg;
    msg << "--example: unknown name \"" << name << "\"; available:";
    for (const auto& [cat_name, unused] : example_catalog()) msg << " " << cat_name;
    throw SchemaError(msg.str());
  }
  r.items.emplace_back(r.model->s, nabla_Phi(*r.model));
  return r;
}

ResolvedInput resolve_input(const Options& o) {
  if (o.input.empty() == o.example.empty())
    throw SchemaError("give exactly one of --input PATH or --example NAME");
  if (!o.example.empty()) return resolve_example(o);
  ResolvedInput r;
  r.title = o.input;
  InputData in = input_from_json(load_json_file(o.input), o.validation_tol());
  if (in.is_model()) r.model = std::move(in.model);
  r.items.emplace_back(*std::move(in.structure), std::move(in.alpha));
  return r;
}

std::string annotate_label(const std::string& label) {
  if (label == "C0") return std::string("C0 (") + kCokahler + ")";
  return label;
}

void print_matrix(const char* name, const Mat& m) {
  std::cout << name << ":\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::cout << "  [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) std::cout << ", ";
      std::cout << format_double(m(i, j));
    }
    std::cout << "]\n";
  }
}

// --- classify -----------------------------------------------------------------

int cmd_classify(const Options& o) {
  ResolvedInput in = resolve_input(o);
  const double tol = o.class_tol();
  bool all_agree = true;
  std::vector<ClassificationReport> reports;
  reports.reserve(in.items.size());
  for (const auto& [s, alpha] : in.items) {
    reports.push_back(classify_full(alpha, s, tol));
    all_agree = all_agree && reports.back().agreement;
  }

  if (o.format == "json") {
    if (reports.size() == 1) {
      std::cout << dump_deterministic(classification_to_json(reports[0]));
    } else {
      Json j = Json::object();
      Json arr = Json::array();
      for (const auto& rep : reports) arr.push_back(classification_to_json(rep));
      j["structures"] = std::move(arr);
      std::cout << dump_deterministic(j);
    }
    return all_agree ? 0 : 3;
  }

  std::cout << "input: " << in.title << "\n";
  for (size_t t = 0; t < reports.size(); ++t) {
    const ClassificationReport& r = reports[t];
    if (!in.item_names.empty()) std::cout << in.item_names[t] << ":\n";
    std::cout << "cv membership residual: " << format_double(r.cv_residual) << "\n";
    std::cout << "component norms:\n";
    for (int i = 1; i <= 12; ++i) {
      const std::string key = "C" + std::to_string(i);
      auto it = r.component_norms.find(key);
      std::cout << "  " << key << ": "
                << format_double(it == r.component_norms.end() ? 0.0 : it->second) << "\n";
    }
    std::cout << "H-parallel label: " << annotate_label(r.hparallel_label) << "\n";
    std::cout << "D1 label: " << r.d1_label << "\n";
    std::cout << "full label: " << annotate_label(r.full_label) << "\n";
    if (r.marginal_branches.empty()) {
      std::cout << "marginal branches: (none)\n";
    } else {
      std::cout << "marginal branches:";
      for (const auto& b : r.marginal_branches) std::cout << " " << b;
      std::cout << "\n";
    }
    std::cout << "routes agree: " << (r.agreement ? "yes" : "NO") << "\n";
    std::cout << "Parseval residual: " << format_double(r.parseval_residual) << "\n";
    print_matrix("intrinsic S", r.intrinsic.S);
    print_matrix("intrinsic h", r.intrinsic.h);
  }
  return all_agree ? 0 : 3;
}

// --- project --------------------------------------------------------------------

ClassId parse_class_id(const std::string& text) {
  if (text == "D1") return ClassId::d1();
  if (text == "D2") return ClassId::d2();
  if (text == "D3") return ClassId::d3();
  if (text == "HP") return ClassId::h_parallel();
  if (text == "Cmin") return ClassId::c_min();
  std::set<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '+')) {
    if (item.size() < 2 || item[0] != 'C')
      throw SchemaError("class: expected C<i>[+C<j>...], D1, D2, D3, HP, or Cmin");
    try {
      size_t pos = 0;
      const int i = std::stoi(item.substr(1), &pos);
      if (pos + 1 != item.size() || i < 1 || i > 12) throw std::invalid_argument(item);
      parts.insert(i);
    } catch (const std::exception&) {
      throw SchemaError("class: \"" + item + "\" is not C1..C12");
    }
  }
  if (parts.empty()) throw SchemaError("class: empty class list");
  return ClassId::sum(parts);
}

int cmd_project(const Options& o, const std::string& class_text) {
  ResolvedInput in = resolve_input(o);
  const ClassId id = parse_class_id(class_text);
  if (o.format == "json") {
    Json arr = Json::array();
    for (const auto& [s, alpha] : in.items) {
      const double norm = component_norm(alpha, id, s);
      const double total = cv_norm(alpha, s);
      Json j = Json::object();
      j["class"] = id.name();
      j["component_norm"] = norm;
      j["cv_norm"] = total;
      j["share"] = total > 0 ? norm / total : 0.0;
      j["projection"] = cov_tensor_to_json(project(alpha, id, s));
      arr.push_back(std::move(j));
    }
    std::cout << dump_deterministic(arr.size() == 1 ? arr[0] : Json{{"structures", arr}});
    return 0;
  }
  std::cout << "input: " << in.title << "\n";
  for (size_t t = 0; t < in.items.size(); ++t) {
    const auto& [s, alpha] = in.items[t];
    if (!in.item_names.empty()) std::cout << in.item_names[t] << ":\n";
    const double norm = component_norm(alpha, id, s);
    const double total = cv_norm(alpha, s);
    std::cout << "class: " << id.name() << "\n";
    std::cout << "component norm: " << format_double(norm) << "\n";
    std::cout << "total norm: " << format_double(total) << "\n";
    std::cout << "share: " << format_double(total > 0 ? norm / total : 0.0) << "\n";
  }
  return 0;
}

// --- dims -----------------------------------------------------------------------

int cmd_dims(const Options& o) {
  check_n(o.n, 4);
  const Structure s = canonical_structure(o.n);
  const int ambient = (2 * o.n + 1) * (o.n * o.n + o.n);
  int total = 0;
  std::vector<std::pair<int, int>> rows;  // computed, formula
  for (int i = 1; i <= 12; ++i) {
    const int computed = class_subspace(ClassId::irreducible(i), s)->dim();
    total += computed;
    rows.emplace_back(computed, class_dimension_formula(i, o.n));
  }
  const bool all_match =
      total == ambient &&
      std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.first == r.second; });

  if (o.format == "json") {
    Json classes = Json::object();
    for (int i = 1; i <= 12; ++i) {
      Json row = Json::object();
      row["computed"] = rows[static_cast<size_t>(i - 1)].first;
      row["formula"] = rows[static_cast<size_t>(i - 1)].second;
      row["match"] = rows[static_cast<size_t>(i - 1)].first == rows[static_cast<size_t>(i - 1)].second;
      classes["C" + std::to_string(i)] = std::move(row);
    }
    Json j = Json::object();
    j["n"] = o.n;
    j["ambient_dimension"] = ambient;
    j["classes"] = std::move(classes);
    j["total_computed"] = total;
    j["all_match"] = all_match;
    std::cout << dump_deterministic(j);
    return all_match ? 0 : 3;
  }

  std::cout << "class dimensions over R^" << (2 * o.n + 1) << " (n = " << o.n
            << ", ambient " << ambient << ")\n";
  std::cout << "class | computed | formula | match\n";
  for (int i = 1; i <= 12; ++i) {
    const auto& [computed, formula] = rows[static_cast<size_t>(i - 1)];
    std::cout << "C" << i << " | " << computed << " | " << formula << " | "
              << (computed == formula ? "ok" : "MISMATCH") << "\n";
  }
  std::cout << "total | " << total << " | " << ambient << " | "
            << (total == ambient ? "ok" : "MISMATCH") << "\n";
  return all_match ? 0 : 3;
}

// --- connection -------------------------------------------------------------------

int cmd_connection(const Options& o) {
  ResolvedInput in = resolve_input(o);
  const double tol = o.class_tol();
  bool all_agree = true;
  Json arr = Json::array();
  std::ostringstream text;
  text << "input: " << in.title << "\n";

  for (size_t t = 0; t < in.items.size(); ++t) {
    const auto& [s, alpha] = in.items[t];
    const Tensor3 A = minimal_connection(alpha, s);
    const Tensor3 T = torsion_from_potential(A);
    const AdaptedReport adapted = verify_adapted(A, alpha, s);
    const TorsionTypes types = torsion_type_decompose(A, s);
    const CharacteristicReport cr = in.model ? characteristic_connection_model(*in.model, tol)
                                             : characteristic_connection(alpha, s, tol);
    all_agree = all_agree && cr.routes_agree;
    std::optional<ParallelTorsionReport> pt;
    if (in.model) pt = parallel_torsion_check(*in.model);
    const ClassificationReport cls = classify_full(alpha, s, tol);
    all_agree = all_agree && cls.agreement;

    if (o.format == "json") {
      arr.push_back(connection_report_to_json(A, T, adapted, types, cr,
                                              pt ? &*pt : nullptr));
      continue;
    }

    if (!in.item_names.empty()) text << in.item_names[t] << ":\n";
    double amax = 0.0;
    for (size_t i = 0; i < A.size(); ++i) amax = std::max(amax, std::abs(A.data()[i]));
    if (amax <= 1e-13) {
      text << "minimal = Levi-Civita, T=0\n";
    } else {
      text << "minimal connection:\n";
      text << "  parallelizes (g, phi, xi), minimal: residual "
           << format_double(adapted.max_residual()) << "\n";
      text << "  torsion type norms: A1 " << format_double(types.n1) << ", A2 "
           << format_double(types.n2) << ", A3 " << format_double(types.n3) << "\n";
    }
    text << "characteristic connection: "
         << (cr.exists ? "exists" : "does not exist") << " (class "
         << annotate_label(cls.full_label) << ")\n";
    if (cr.exists) {
      const Tensor3 expect =
          wedge_covector_two_form(s.eta(), d_eta_from_S(extract_S(alpha, s), s));
      double d = 0.0, scale = 0.0;
      for (size_t i = 0; i < expect.size(); ++i) {
        d = std::max(d, std::abs(cr.T.data()[i] - expect.data()[i]));
        scale = std::max(scale, std::abs(expect.data()[i]));
      }
      const double r = d / (1.0 + scale);
      text << "  T = eta ^ d eta: " << (r <= tol ? "yes" : "no") << " (residual "
           << format_double(r) << ")\n";
      text << "  totally skew: residual " << format_double(cr.torsion_skew_residual) << "\n";
    }
    text << "  criteria: xi Killing residual " << format_double(cr.killing_residual)
         << ", Nijenhuis skew residual " << format_double(cr.nijenhuis_skew_residual)
         << ", class residual " << format_double(cr.class_residual) << "\n";
    if (pt) {
      const bool holds = pt->holds(tol);
      text << "parallel torsion: (i) " << format_double(pt->res_i) << " (ii) "
           << format_double(pt->res_ii) << " (iii) " << format_double(pt->res_iii)
           << " -> " << (holds ? "holds" : "fails") << "\n";
    }
  }

  if (o.format == "json") {
    std::cout << dump_deterministic(arr.size() == 1 ? arr[0] : Json{{"structures", arr}});
  } else {
    std::cout << text.str();
  }
  return all_agree ? 0 : 3;
}

// --- selftest ---------------------------------------------------------------------

int cmd_selftest(const Options& o, bool n_given) {
  std::vector<int> ns = n_given ? std::vector<int>{o.n} : std::vector<int>{1, 2, 3};
  const SelftestReport r = run_selftest(ns, o.seed);

  if (o.format == "json") {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      Json jc = Json::object();
      jc["name"] = c.name;
      jc["residual"] = c.residual;
      jc["threshold"] = c.threshold;
      jc["passed"] = c.passed;
      checks.push_back(std::move(jc));
    }
    Json j = Json::object();
    j["ns"] = ns;
    j["checks"] = std::move(checks);
    j["passed"] = r.passed;
    j["failed"] = r.failed;
    std::cout << dump_deterministic(j);
    return r.ok() ? 0 : 1;
  }

  std::cout << "selftest over n in {";
  for (size_t i = 0; i < ns.size(); ++i) std::cout << (i ? ", " : "") << ns[i];
  std::cout << "}\n";
  for (const auto& c : r.checks) {
    std::cout << (c.passed ? "pass " : "FAIL ") << c.name << " (residual "
              << format_double(c.residual) << ", threshold " << format_double(c.threshold)
              << ")\n";
  }
  std::cout << "passed " << r.passed << ", failed " << r.failed << "\n";
  return r.ok() ? 0 : 1;
}

// --- examples ---------------------------------------------------------------------

int cmd_examples(const Options& o) {
  if (o.format == "json") {
    Json arr = Json::array();
    for (const auto& [name, desc] : example_catalog()) {
      Json j = Json::object();
      j["name"] = name;
      j["description"] = desc;
      arr.push_back(std::move(j));
    }
    std::cout << dump_deterministic(arr);
    return 0;
  }
  std::cout << "available examples (use with --example NAME):\n";
  for (const auto& [name, desc] : example_catalog())
    std::cout << "  " << name << ": " << desc << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointwise classification of almost contact metric structures"};
  app.require_subcommand(1);

  Options o;
  std::string class_text;

  CLI::App* c_classify = app.add_subcommand(
      "classify", "Classify an input tensor or model into the C1..C12 scheme");
  add_common_flags(c_classify, o, true);

  CLI::App* c_project = app.add_subcommand(
      "project", "Project the input onto a class subspace and report norms");
  c_project->add_option("class", class_text, "Target class: C<i>[+C<j>...], D1, D2, D3, HP, Cmin")
      ->required();
  add_common_flags(c_project, o, true);

  CLI::App* c_dims = app.add_subcommand("dims", "Print the class dimension table for a given n");
  add_common_flags(c_dims, o, false);

  CLI::App* c_connection = app.add_subcommand(
      "connection", "Minimal/characteristic connection analysis of the input");
  add_common_flags(c_connection, o, true);

  CLI::App* c_examples = app.add_subcommand("examples", "List the built-in example catalog");
  add_common_flags(c_examples, o, false);

  CLI::App* c_selftest = app.add_subcommand("selftest", "Run the invariant battery");
  add_common_flags(c_selftest, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c_classify)) return cmd_classify(o);
    if (app.got_subcommand(c_project)) return cmd_project(o, class_text);
    if (app.got_subcommand(c_dims)) return cmd_dims(o);
    if (app.got_subcommand(c_connection)) return cmd_connection(o);
    if (app.got_subcommand(c_examples)) return cmd_examples(o);
    if (app.got_subcommand(c_selftest)) return cmd_selftest(o, c_selftest->count("--n") > 0);
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
