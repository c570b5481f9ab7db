#include "framekit/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace framekit::io {

namespace {

bool is_scalar(const Json& v) { return !v.is_array() && !v.is_object(); }

bool flat(const Json& v) {
  for (const auto& e : v) {
    if (!is_scalar(e)) {
      return false;
    }
  }
  return true;
}

void write_scalar(std::string& out, const Json& v) {
  if (v.is_number_float()) {
    const double d = v.get<double>();
    out += std::isfinite(d) ? format_double(d) : "null";
  } else {
    out += v.dump();
  }
}

void write(std::string& out, const Json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(key).dump() + ": ";
      write(out, value, indent + 2);
    }
    out += "\n" + close + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    if (flat(v)) {
      out += "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        write_scalar(out, v[i]);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      write(out, v[i], indent + 2);
    }
    out += "\n" + close + "]";
  } else {
    write_scalar(out, v);
  }
}

const Json& member(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ParseError(std::string("missing member \"") + key + "\"");
  }
  return doc.at(key);
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) {
    throw ParseError(std::string(what) + " must be a number");
  }
  return v.get<double>();
}

template <typename Scalar>
Json scalar_to_json(const Scalar& s) {
  if constexpr (std::is_same_v<Scalar, Complex>) {
    return Json::array({s.real(), s.imag()});
  } else {
    return s;
  }
}

template <typename Scalar>
Scalar scalar_from_json(const Json& v) {
  if constexpr (std::is_same_v<Scalar, Complex>) {
    if (v.is_number()) {
      return {v.get<double>(), 0.0};
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ParseError("complex entry must be a number or a [re, im] pair");
  } else {
    return number(v, "matrix entry");
  }
}

template <typename Scalar>
Json matrix_to_json(const Operator<Scalar>& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      row.push_back(scalar_to_json(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Scalar>
Operator<Scalar> matrix_from_json(const Json& rows, Index dim) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != dim) {
    throw ParseError("operator must have ambient_dim rows");
  }
  Operator<Scalar> m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
      throw ParseError("operator rows must have ambient_dim entries");
    }
    for (Index j = 0; j < dim; ++j) {
      m(i, j) = scalar_from_json<Scalar>(row[static_cast<std::size_t>(j)]);
    }
  }
  return m;
}

template <typename Scalar>
void put_field(Json& doc) {
  if constexpr (std::is_same_v<Scalar, Complex>) {
    doc["field"] = "complex";
  }
}

Index read_dim(const Json& doc) {
  const auto& d = member(doc, "ambient_dim");
  if (!d.is_number_integer() || d.get<long long>() < 1) {
    throw ParseError("ambient_dim must be a positive integer");
  }
  return static_cast<Index>(d.get<long long>());
}

struct AtomFields {
  AtomicMeasure measure;
  std::vector<double> weights;
};

AtomFields read_atoms(const Json& atoms) {
  if (!atoms.is_array() || atoms.empty()) {
    throw ParseError("atoms must be a nonempty array");
  }
  std::vector<double> points;
  std::vector<double> masses;
  std::vector<double> weights;
  for (const auto& a : atoms) {
    points.push_back(number(member(a, "point"), "point"));
    masses.push_back(number(member(a, "mass"), "mass"));
    weights.push_back(a.contains("weight") ? number(a.at("weight"), "weight") : 1.0);
  }
  try {
    return {AtomicMeasure(std::move(points), std::move(masses)), std::move(weights)};
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Json space_to_json(const ParameterSpace& space) {
  Json out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteSpace>) {
          out["kind"] = "finite";
          out["labels"] = s.labels;
        } else if constexpr (std::is_same_v<T, IntervalSpace>) {
          out["kind"] = "interval";
          out["a"] = s.a;
          out["b"] = s.b;
        } else {
          out["kind"] = "circle";
          out["period"] = s.period;
        }
      },
      space.kind());
  return out;
}

ParameterSpace space_from_json(const Json& doc) {
  const auto& kind = member(doc, "kind");
  if (!kind.is_string()) {
    throw ParseError("space kind must be a string");
  }
  const auto k = kind.get<std::string>();
  try {
    if (k == "interval") {
      return ParameterSpace::interval(number(member(doc, "a"), "a"), number(member(doc, "b"), "b"));
    }
    if (k == "circle") {
      return ParameterSpace::circle(number(member(doc, "period"), "period"));
    }
    if (k == "finite") {
      return ParameterSpace::finite(member(doc, "labels").get<std::vector<double>>());
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown space kind: " + k);
}

template <typename Scalar>
OperatorFamily<Scalar> resolution_member(const Json& v, const std::filesystem::path& base_dir) {
  if (v.is_string()) {
    return resolution_from_json<Scalar>(read_file(base_dir / v.get<std::string>()));
  }
  return resolution_from_json<Scalar>(v);
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) {
    return "0";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string dump(const Json& value) {
  std::string out;
  write(out, value, 0);
  out += '\n';
  return out;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

bool is_complex(const Json& doc) {
  if (!doc.is_object() || !doc.contains("field")) {
    return false;
  }
  const auto& f = doc.at("field");
  if (f == "complex") return true;
  if (f == "real") return false;
  throw ParseError("field must be \"real\" or \"complex\"");
}

template <typename Scalar>
Json to_json(const WeightedSubspaceFamily<Scalar>& family) {
  Json doc;
  put_field<Scalar>(doc);
  doc["ambient_dim"] = family.ambient_dim();
  Json atoms = Json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    Json a;
    a["point"] = family.atoms().point(i);
    a["mass"] = family.mass(i);
    a["weight"] = family.weight(i);
    const Operator<Scalar> rows = family.subspace(i).basis().transpose();
    Json basis = Json::array();
    for (Index r = 0; r < rows.rows(); ++r) {
      Json row = Json::array();
      for (Index c = 0; c < rows.cols(); ++c) {
        row.push_back(scalar_to_json(rows(r, c)));
      }
      basis.push_back(std::move(row));
    }
    a["basis"] = std::move(basis);
    atoms.push_back(std::move(a));
  }
  doc["atoms"] = std::move(atoms);
  return doc;
}

template <typename Scalar>
Json to_json(const OperatorFamily<Scalar>& family) {
  Json doc;
  put_field<Scalar>(doc);
  doc["ambient_dim"] = family.ambient_dim();
  doc["sum_mode"] = std::string(to_string(family.mode()));
  Json atoms = Json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    Json a;
    a["point"] = family.atoms().point(i);
    a["mass"] = family.mass(i);
    a["weight"] = family.weight(i);
    atoms.push_back(std::move(a));
  }
  doc["atoms"] = std::move(atoms);
  Json ops = Json::array();
  for (const auto& t : family.operators()) {
    ops.push_back(matrix_to_json(t));
  }
  doc["operators"] = std::move(ops);
  return doc;
}

template <typename Scalar>
Json to_json(const PerturbationScenario<Scalar>& scenario) {
  Json doc;
  put_field<Scalar>(doc);
  doc["base"] = to_json(scenario.base);
  doc["perturbed"] = to_json(scenario.perturbed);
  doc["lambda"] = scenario.lambda;
  doc["lambda1"] = scenario.params.lambda1;
  doc["lambda2"] = scenario.params.lambda2;
  doc["phi"] = scenario.params.phi_spec;
  if (!scenario.checks.empty()) {
    doc["checks"] = scenario.checks;
  }
  return doc;
}

Json to_json(const ContinuousSpec& spec) {
  Json doc;
  doc["space"] = space_to_json(spec.space);
  doc["rule"] = std::string(to_string(spec.scheme.rule));
  doc["n"] = spec.scheme.n;
  doc["weight"] = spec.weight;
  doc["family"] = spec.family;
  return doc;
}

Json to_json(const VerificationReport& report) {
  auto checks = [](const std::vector<Check>& list) {
    Json out = Json::array();
    for (const auto& c : list) {
      Json e;
      e["name"] = c.name;
      e["passed"] = c.passed;
      e["residual"] = c.residual;
      e["tolerance"] = c.tolerance;
      out.push_back(std::move(e));
    }
    return out;
  };
  Json doc;
  doc["theorem_id"] = report.theorem_id();
  if (report.mode()) {
    doc["mode"] = *report.mode();
  }
  doc["passed"] = report.passed();
  doc["hypotheses_hold"] = report.hypotheses_hold();
  doc["conclusion_checked"] = report.conclusion_checked();
  doc["hypotheses"] = checks(report.hypotheses());
  doc["conclusions"] = checks(report.conclusions());
  doc["diagnostics"] = checks(report.diagnostics());
  Json constants = Json::object();
  for (const auto& [k, v] : report.constants()) {
    constants[k] = v;
  }
  doc["constants"] = std::move(constants);
  Json tolerances = Json::object();
  for (const auto& [k, v] : report.tolerances()) {
    tolerances[k] = v;
  }
  doc["tolerances"] = std::move(tolerances);
  doc["notes"] = report.notes();
  return doc;
}

Json to_json(const FrameBounds& bounds) {
  Json doc;
  doc["lower"] = bounds.lower;
  doc["upper"] = bounds.upper;
  doc["is_frame"] = bounds.is_frame();
  doc["condition_number"] = bounds.condition_number();
  return doc;
}

template <typename Scalar>
Json vector_to_json(const Vector<Scalar>& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(scalar_to_json(v(i)));
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> vector_from_json(const Json& doc) {
  if (!doc.is_array() || doc.empty()) {
    throw ParseError("vector must be a nonempty array");
  }
  Vector<Scalar> v(static_cast<Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    v(static_cast<Index>(i)) = scalar_from_json<Scalar>(doc[i]);
  }
  return v;
}

template <typename Scalar>
WeightedSubspaceFamily<Scalar> family_from_json(const Json& doc,
                                                std::vector<std::string>* warnings) {
  const Index dim = read_dim(doc);
  const auto& atoms = member(doc, "atoms");
  auto fields = read_atoms(atoms);
  std::vector<Subspace<Scalar>> subspaces;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& rows = member(atoms[i], "basis");
    if (!rows.is_array()) {
      throw ParseError("basis must be an array of vectors");
    }
    if (rows.empty()) {
      subspaces.emplace_back(dim);
      continue;
    }
    Operator<Scalar> v(dim, static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto vec = vector_from_json<Scalar>(rows[r]);
      if (vec.size() != dim) {
        throw ParseError("basis vector length differs from ambient_dim");
      }
      v.col(static_cast<Index>(r)) = vec;
    }
    const Operator<Scalar> gram = v.adjoint() * v;
    const double deviation =
        (gram - Operator<Scalar>::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (deviation <= 1e-10) {
      subspaces.push_back(Subspace<Scalar>::from_orthonormal_columns(v));
      continue;
    }
    auto w = column_space(v, 1e-12);
    const double change = (w.projector() * v - v).norm() + deviation;
    if (warnings && change > 1e-8) {
      warnings->push_back("atom " + std::to_string(i) + ": basis orthonormalized (deviation " +
                          format_double(deviation) + ")");
    }
    subspaces.push_back(std::move(w));
  }
  try {
    return WeightedSubspaceFamily<Scalar>(std::move(fields.measure), std::move(fields.weights),
                                          std::move(subspaces));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

template <typename Scalar>
OperatorFamily<Scalar> resolution_from_json(const Json& doc) {
  const Index dim = read_dim(doc);
  auto fields = read_atoms(member(doc, "atoms"));
  const auto& mode = member(doc, "sum_mode");
  if (!mode.is_string()) {
    throw ParseError("sum_mode must be a string");
  }
  const auto& ops_doc = member(doc, "operators");
  if (!ops_doc.is_array() || ops_doc.size() != fields.measure.size()) {
    throw ParseError("operators must have one matrix per atom");
  }
  std::vector<Operator<Scalar>> ops;
  for (const auto& m : ops_doc) {
    ops.push_back(matrix_from_json<Scalar>(m, dim));
  }
  try {
    return OperatorFamily<Scalar>(std::move(fields.measure), std::move(fields.weights),
                                  std::move(ops), parse_sum_mode(mode.get<std::string>()));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

template <typename Scalar>
PerturbationScenario<Scalar> perturbation_from_json(const Json& doc,
                                                    const std::filesystem::path& base_dir) {
  auto base = resolution_member<Scalar>(member(doc, "base"), base_dir);
  auto perturbed = resolution_member<Scalar>(member(doc, "perturbed"), base_dir);
  const double lambda = number(member(doc, "lambda"), "lambda");
  const double l1 = doc.contains("lambda1") ? number(doc.at("lambda1"), "lambda1") : 0.0;
  const double l2 = doc.contains("lambda2") ? number(doc.at("lambda2"), "lambda2") : 0.0;
  std::string phi = "const:0";
  if (doc.contains("phi")) {
    if (!doc.at("phi").is_string()) {
      throw ParseError("phi must be a weight spec string");
    }
    phi = doc.at("phi").get<std::string>();
  }
  std::vector<std::string> checks;
  if (doc.contains("checks")) {
    checks = doc.at("checks").get<std::vector<std::string>>();
  }
  try {
    auto params = PerturbationParams::make(l1, l2, WeightFunction::parse(phi), base.atoms());
    return {std::move(base), std::move(perturbed), lambda, std::move(params), std::move(checks)};
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(e.what());
  }
}

ContinuousSpec continuous_from_json(const Json& doc) {
  ContinuousSpec spec{space_from_json(member(doc, "space")), {}, "const:1", "rotating_line"};
  try {
    if (doc.contains("rule")) {
      spec.scheme.rule = parse_quadrature_rule(doc.at("rule").get<std::string>());
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  const auto& n = member(doc, "n");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    throw ParseError("n must be a positive integer");
  }
  spec.scheme.n = static_cast<std::size_t>(n.get<long long>());
  if (doc.contains("weight")) {
    spec.weight = doc.at("weight").get<std::string>();
  }
  if (doc.contains("family")) {
    spec.family = doc.at("family").get<std::string>();
  }
  return spec;
}

DocumentKind classify(const Json& doc) {
  if (!doc.is_object()) {
    throw ParseError("instance document must be a JSON object");
  }
  if (doc.contains("space")) return DocumentKind::continuous;
  if (doc.contains("base")) return DocumentKind::perturbation;
  if (doc.contains("operators")) return DocumentKind::resolution;
  if (doc.contains("atoms")) return DocumentKind::fusion_frame;
  throw ParseError("cannot tell the instance kind from the document members");
}

Json to_json(const Instance& instance) {
  return std::visit([](const auto& v) { return to_json(v); }, instance);
}

Instance instance_from_json(const Json& doc, const std::filesystem::path& base_dir,
                            std::vector<std::string>* warnings) {
  const auto kind = classify(doc);
  if (is_complex(doc)) {
    throw ParseError("complex instances are supported through the library API only");
  }
  try {
    switch (kind) {
      case DocumentKind::continuous:
        return continuous_from_json(doc);
      case DocumentKind::perturbation:
        return perturbation_from_json<double>(doc, base_dir);
      case DocumentKind::resolution:
        return resolution_from_json<double>(doc);
      case DocumentKind::fusion_frame:
        return family_from_json<double>(doc, warnings);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unreachable document kind");
}

Instance load_instance(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  return instance_from_json(read_file(path), path.parent_path(), warnings);
}

#define FRAMEKIT_INSTANTIATE_IO(S)                                                                \
  template Json to_json<S>(const WeightedSubspaceFamily<S>&);                                      \
  template Json to_json<S>(const OperatorFamily<S>&);                                              \
  template Json to_json<S>(const PerturbationScenario<S>&);                                        \
  template Json vector_to_json<S>(const Vector<S>&);                                               \
  template Vector<S> vector_from_json<S>(const Json&);                                             \
  template WeightedSubspaceFamily<S> family_from_json<S>(const Json&, std::vector<std::string>*);  \
  template OperatorFamily<S> resolution_from_json<S>(const Json&);                                 \
  template PerturbationScenario<S> perturbation_from_json<S>(const Json&,                          \
                                                             const std::filesystem::path&);

FRAMEKIT_INSTANTIATE_IO(double)
FRAMEKIT_INSTANTIATE_IO(Complex)

}  // namespace framekit::io
