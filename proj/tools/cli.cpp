#include "cli.hpp"

#include "framekit/fusion_frame.hpp"
#include "framekit/perturbation.hpp"
#include "framekit/random.hpp"
#include "framekit/resolution.hpp"
#include "framekit/scenarios.hpp"
#include "framekit/serialization.hpp"
#include "framekit/theorems.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

namespace framekit::cli {

namespace {

using io::Json;

struct Config {
  std::string input;
  std::string scenario;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 1;
  Index dim = 3;
  std::size_t atoms = 4;
  std::vector<std::size_t> n{64};
  std::string rule = "midpoint";
  std::optional<double> tol;
  std::vector<double> f;
  bool list = false;
  bool n_given = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  const Config& config;
  std::ostream& out;
  std::ostream& err;

  void emit(const std::string& text) const {
    if (config.out.empty()) {
      out << text;
    } else {
      io::write_file(config.out, text);
    }
  }
};

std::optional<double> env_tolerance() {
  const char* raw = std::getenv(kToleranceEnv);
  if (!raw || !*raw) {
    return std::nullopt;
  }
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0)) {
    throw UsageError(std::string(kToleranceEnv) + " must be a positive number");
  }
  return v;
}

VerifyOptions options_for(const Config& config) {
  VerifyOptions options;
  std::optional<double> tol = config.tol ? config.tol : env_tolerance();
  if (tol) {
    if (!(*tol > 0.0)) {
      throw UsageError("--tol must be positive");
    }
    options.tol.hypothesis = *tol;
    options.tol.bound_slack = *tol;
  }
  return options;
}

ScenarioParams scenario_params(const Config& config) {
  ScenarioParams p;
  p.seed = config.seed;
  p.dim = config.dim;
  p.atoms = config.atoms;
  p.n = config.n.empty() ? 64 : config.n.front();
  p.rule = parse_quadrature_rule(config.rule);
  return p;
}

Instance acquire(const Context& ctx) {
  const auto& c = ctx.config;
  if (!c.input.empty() && !c.scenario.empty()) {
    throw UsageError("give either an input file or --scenario, not both");
  }
  if (!c.input.empty()) {
    std::vector<std::string> warnings;
    auto instance = io::load_instance(c.input, &warnings);
    for (const auto& w : warnings) {
      ctx.err << "warning: " << w << '\n';
    }
    return instance;
  }
  if (!c.scenario.empty()) {
    return make_scenario(c.scenario, scenario_params(c));
  }
  throw UsageError("an input file or --scenario is required");
}

std::string csv_number(double v) { return io::format_double(v); }

Vector<double> probe_vector(const Config& c, Index dim) {
  if (c.f.empty()) {
    Rng rng(c.seed);
    return random_unit_vector<double>(rng, dim);
  }
  if (static_cast<Index>(c.f.size()) != dim) {
    throw UsageError("--f has " + std::to_string(c.f.size()) + " entries, expected " +
                     std::to_string(dim));
  }
  return Eigen::Map<const Vector<double>>(c.f.data(), dim);
}

void summarize(const Context& ctx, const VerificationReport& report) {
  ctx.err << (report.passed() ? "PASS " : "FAIL ") << report.theorem_id();
  if (!report.hypotheses_hold()) {
    ctx.err << " (hypothesis failed)";
  }
  ctx.err << '\n';
}

int emit_reports(const Context& ctx, const std::vector<VerificationReport>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    summarize(ctx, r);
    ok = ok && r.passed();
  }
  if (ctx.config.format == "csv") {
    std::ostringstream csv;
    csv << "theorem_id,passed,hypotheses_hold,hypotheses,conclusions\n";
    for (const auto& r : reports) {
      csv << r.theorem_id() << ',' << r.passed() << ',' << r.hypotheses_hold() << ','
          << r.hypotheses().size() << ',' << r.conclusions().size() << '\n';
    }
    ctx.emit(csv.str());
  } else {
    Json array = Json::array();
    for (const auto& r : reports) {
      array.push_back(io::to_json(r));
    }
    ctx.emit(io::dump(array));
  }
  return ok ? kPass : kCheckFailed;
}

double first_power_residual(const WeightedSubspaceFamily<double>& frame) {
  const Index dim = frame.ambient_dim();
  Operator<double> sum = Operator<double>::Zero(dim, dim);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (frame.active(i)) {
      sum += frame.weight(i) * frame.mass(i) * frame.subspace(i).projector();
    }
  }
  return max_column_norm<double>(Operator<double>::Identity(dim, dim) - sum);
}

double pairwise_overlap(const WeightedSubspaceFamily<double>& frame) {
  double overlap = 0.0;
  for (std::size_t a = 0; a < frame.size(); ++a) {
    for (std::size_t b = a + 1; b < frame.size(); ++b) {
      if (frame.active(a) && frame.active(b) && frame.subspace(a).rank() > 0 &&
          frame.subspace(b).rank() > 0) {
        overlap = std::max(overlap, operator_norm<double>(frame.subspace(a).basis().adjoint() *
                                                          frame.subspace(b).basis()));
      }
    }
  }
  return overlap;
}

WeightedSubspaceFamily<double> as_frame(const Instance& instance) {
  if (const auto* spec = std::get_if<ContinuousSpec>(&instance)) {
    return discretize_family(*spec);
  }
  return std::get<WeightedSubspaceFamily<double>>(instance);
}

// ---------------------------------------------------------------------------

int cmd_gen(const Context& ctx) {
  if (ctx.config.list) {
    for (const auto& s : scenario_registry()) {
      ctx.out << s.name << '\t' << s.kind << '\t' << s.description << '\n';
    }
    return kPass;
  }
  if (ctx.config.scenario.empty()) {
    throw UsageError("gen needs --scenario (see gen --list)");
  }
  ctx.emit(io::dump(io::to_json(acquire(ctx))));
  return kPass;
}

int cmd_discretize(const Context& ctx) {
  const auto& c = ctx.config;
  if (c.n.empty()) {
    throw UsageError("--n needs at least one value");
  }
  const auto rule = parse_quadrature_rule(c.rule);
  const bool sweep = c.n.size() > 1 || c.format == "csv";
  std::optional<ContinuousSpec> file_spec;
  if (!c.input.empty()) {
    auto instance = acquire(ctx);
    if (!std::holds_alternative<ContinuousSpec>(instance)) {
      throw UsageError("input is already atomic");
    }
    file_spec = std::get<ContinuousSpec>(instance);
  } else if (c.scenario.empty()) {
    throw UsageError("discretize needs an input spec or --scenario");
  }

  if (!sweep) {
    ContinuousSpec spec =
        file_spec ? *file_spec : scenario_spec(c.scenario, c.n.front(), rule);
    if (file_spec && c.n_given) {
      spec.scheme.n = c.n.front();
    }
    ctx.emit(io::dump(io::to_json(discretize_family(spec))));
    return kPass;
  }

  std::vector<SweepRow> rows;
  if (file_spec) {
    const std::vector<std::size_t> n_list =
        c.n_given ? c.n : std::vector<std::size_t>{file_spec->scheme.n};
    for (std::size_t k = 0; k < n_list.size(); ++k) {
      if (k > 0 && n_list[k] <= n_list[k - 1]) {
        throw UsageError("--n values must be strictly ascending");
      }
      ContinuousSpec spec = *file_spec;
      spec.scheme.n = n_list[k];
      const auto b = frame_bounds(discretize_family(spec));
      rows.push_back({n_list[k], b.lower, b.upper, std::nullopt, std::nullopt});
    }
  } else {
    rows = sweep_discretization(c.scenario, c.n, rule);
  }
  std::ostringstream csv;
  csv << "n,A,B,abs_error_A,abs_error_B\n";
  for (const auto& r : rows) {
    csv << r.n << ',' << csv_number(r.lower) << ',' << csv_number(r.upper) << ','
        << (r.lower_error ? csv_number(*r.lower_error) : "") << ','
        << (r.upper_error ? csv_number(*r.upper_error) : "") << '\n';
  }
  ctx.emit(csv.str());
  return kPass;
}

Json analyze_frame(const WeightedSubspaceFamily<double>& frame, const VerifyOptions& options,
                   bool& ok) {
  const auto bounds = frame_bounds(frame);
  const auto report = verify_characterization(frame, options.tol);
  ok = ok && report.passed();
  Json doc;
  doc["kind"] = "fusion_frame";
  doc["ambient_dim"] = frame.ambient_dim();
  doc["atom_count"] = frame.size();
  doc["bounds"] = io::to_json(bounds);
  doc["zero_weight_atoms"] = frame.zero_weight_atoms();
  doc["report"] = io::to_json(report);
  return doc;
}

Json analyze_resolution(const OperatorFamily<double>& family, const VerifyOptions& options,
                        bool& ok) {
  const auto check = verify_resolution(family, options);
  ok = ok && check.passed();
  Json doc;
  doc["kind"] = "resolution";
  doc["sum_mode"] = std::string(to_string(family.mode()));
  doc["ambient_dim"] = family.ambient_dim();
  doc["atom_count"] = family.size();
  Json bounds;
  bounds["lower"] = check.bounds.lower;
  bounds["upper"] = check.bounds.upper;
  bounds["condition_number"] = check.bounds.lower > 0.0
                                   ? check.bounds.upper / check.bounds.lower
                                   : std::numeric_limits<double>::infinity();
  doc["bounds"] = std::move(bounds);
  doc["sup_norm"] = check.sup_norm;
  doc["identity_residual"] = check.report.constant("identity_residual");
  doc["report"] = io::to_json(check.report);
  return doc;
}

int cmd_analyze(const Context& ctx) {
  const auto instance = acquire(ctx);
  const auto options = options_for(ctx.config);
  bool ok = true;
  Json doc;
  if (const auto* family = std::get_if<OperatorFamily<double>>(&instance)) {
    doc = analyze_resolution(*family, options, ok);
  } else if (const auto* p = std::get_if<PerturbationScenario<double>>(&instance)) {
    doc["kind"] = "perturbation";
    doc["base"] = analyze_resolution(p->base, options, ok);
    doc["perturbed"] = analyze_resolution(p->perturbed, options, ok);
  } else {
    doc = analyze_frame(as_frame(instance), options, ok);
  }
  if (ctx.config.format == "csv") {
    const Json& b = doc.contains("bounds") ? doc["bounds"] : doc["base"]["bounds"];
    std::ostringstream csv;
    csv << "quantity,value\n";
    csv << "kind," << doc["kind"].get<std::string>() << '\n';
    csv << "lower," << csv_number(b["lower"].get<double>()) << '\n';
    csv << "upper," << csv_number(b["upper"].get<double>()) << '\n';
    csv << "condition_number," << csv_number(b["condition_number"].get<double>()) << '\n';
    ctx.emit(csv.str());
  } else {
    ctx.emit(io::dump(doc));
  }
  return ok ? kPass : kCheckFailed;
}

int cmd_reconstruct(const Context& ctx) {
  const auto instance = acquire(ctx);
  const auto options = options_for(ctx.config);
  Json doc;
  bool ok = true;
  if (const auto* family = std::get_if<OperatorFamily<double>>(&instance)) {
    const Vector<double> f = probe_vector(ctx.config, family->ambient_dim());
    doc["f"] = io::vector_to_json(f);
    if (family->mode() == SumMode::raw) {
      const auto result = countable_reconstruction(*family, f, options);
      doc["inverse_first"] = io::vector_to_json(result.inverse_first);
      doc["inverse_last"] = io::vector_to_json(result.inverse_last);
      doc["index_set"] = result.index_set;
      doc["report"] = io::to_json(result.report);
      ok = result.report.passed();
      summarize(ctx, result.report);
    } else {
      const Vector<double> g = identity_sum(*family) * f;
      const double residual = f.norm() > 0.0 ? (g - f).norm() / f.norm() : g.norm();
      doc["reconstruction"] = io::vector_to_json(g);
      doc["relative_residual"] = residual;
      ok = residual <= 1e-8;
    }
  } else if (std::holds_alternative<PerturbationScenario<double>>(instance)) {
    throw UsageError("reconstruct takes a fusion frame or a resolution");
  } else {
    const auto frame = as_frame(instance);
    const Vector<double> f = probe_vector(ctx.config, frame.ambient_dim());
    doc["f"] = io::vector_to_json(f);
    try {
      const auto result = reconstruct(frame, f);
      doc["reconstruction"] = io::vector_to_json(result.value);
      doc["relative_residual"] = result.relative_residual;
      doc["bounds"] = io::to_json(frame_bounds(frame));
      ok = result.relative_residual <= 1e-8;
    } catch (const NotAFrameError& e) {
      doc["error"] = e.what();
      doc["bounds"] = io::to_json(e.bounds());
      ok = false;
    }
  }
  ctx.emit(io::dump(doc));
  return ok ? kPass : kCheckFailed;
}

std::vector<VerificationReport> perturbation_reports(const PerturbationScenario<double>& p,
                                                     const VerifyOptions& options) {
  std::vector<std::string> checks = p.checks;
  if (checks.empty()) {
    checks = {"perturbation", "perturbation_operator", "perturbed_resolution"};
  }
  std::vector<VerificationReport> reports;
  for (const auto& id : checks) {
    if (id == "perturbation") {
      reports.push_back(check_perturbation(p.base, p.perturbed, p.params, options));
    } else if (id == "perturbation_operator") {
      reports.push_back(build_perturbation_operator(p.base, p.perturbed, p.lambda, options).report);
    } else if (id == "perturbed_resolution") {
      reports.push_back(
          verify_perturbed_resolution(p.base, p.perturbed, p.params, p.lambda, options));
    } else if (id == "composite_perturbation") {
      reports.push_back(
          verify_composite_perturbation(p.base, p.perturbed, p.params, p.lambda, options));
    } else {
      throw UsageError("unknown perturbation check: " + id);
    }
  }
  return reports;
}

int cmd_verify(const Context& ctx) {
  const auto instance = acquire(ctx);
  const auto options = options_for(ctx.config);
  std::vector<VerificationReport> reports;
  auto skip = [&](const char* id, const char* why) { ctx.err << "SKIP " << id << ": " << why << '\n'; };

  if (const auto* p = std::get_if<PerturbationScenario<double>>(&instance)) {
    reports = perturbation_reports(*p, options);
  } else if (const auto* family = std::get_if<OperatorFamily<double>>(&instance)) {
    reports.push_back(verify_resolution(*family, options).report);
    if (family->mode() == SumMode::raw) {
      std::vector<Vector<double>> basis;
      for (Index k = 0; k < family->ambient_dim(); ++k) {
        basis.push_back(canonical_vector<double>(family->ambient_dim(), k));
      }
      reports.push_back(verify_induced_frame_sequence<double>(*family, basis, options));
      const Vector<double> ones = Vector<double>::Ones(family->ambient_dim());
      reports.push_back(countable_reconstruction(*family, ones, options).report);
      skip("induced_frame", "needs the weighted sum convention");
    } else {
      reports.push_back(verify_induced_frame(*family, options));
      const auto frame = induced_family(*family, options.tol.rank);
      double gap = 0.0;
      for (std::size_t i = 0; i < family->size(); ++i) {
        const auto& t = family->op(i);
        gap = std::max(gap, operator_norm<double>(t * frame.subspace(i).projector() - t) /
                                std::max(1.0, family->norms()[i]));
      }
      if (gap <= options.tol.structure) {
        reports.push_back(verify_converse_bounds(frame, *family, options));
      } else {
        skip("converse_bounds", "T_i P_i != T_i on the induced subspaces");
      }
      skip("induced_frame_sequence", "needs the raw sum convention");
      skip("countable_reconstruction", "needs the raw sum convention");
    }
  } else {
    const auto frame = as_frame(instance);
    reports.push_back(verify_characterization(frame, options.tol));
    if (first_power_residual(frame) <= options.tol.hypothesis) {
      reports.push_back(verify_projection_family(frame, options));
    } else {
      skip("projection_family", "f = sum w mu P f does not hold");
    }
    if (pairwise_overlap(frame) <= options.tol.structure) {
      reports.push_back(verify_orthogonal_reconstruction(frame, options));
    } else {
      skip("orthogonal_reconstruction", "subspaces are not pairwise orthogonal");
    }
  }
  return emit_reports(ctx, reports);
}

int cmd_perturb(const Context& ctx) {
  const auto instance = acquire(ctx);
  const auto* p = std::get_if<PerturbationScenario<double>>(&instance);
  if (!p) {
    throw UsageError("perturb needs a perturbation document or scenario");
  }
  return emit_reports(ctx, perturbation_reports(*p, options_for(ctx.config)));
}

void add_common(CLI::App* cmd, Config& c, bool with_input = true) {
  if (with_input) {
    cmd->add_option("input", c.input, "instance JSON file");
  }
  cmd->add_option("--scenario", c.scenario, "registered scenario name");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--dim", c.dim, "ambient dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--atoms", c.atoms, "number of atoms")->check(CLI::PositiveNumber);
  cmd->add_option("--n", c.n, "quadrature nodes (comma separated for a sweep)")->delimiter(',');
  cmd->add_option("--rule", c.rule, "midpoint, trapezoid or gauss_legendre");
  cmd->add_option("--tol", c.tol, "hypothesis tolerance (default 1e-9)");
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config config;
  CLI::App app{"framekit: fusion frames and resolutions of the identity"};
  app.name("framekit");
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "write a scenario instance as JSON");
  add_common(gen, config, false);
  gen->add_flag("--list", config.list, "list registered scenarios");
  auto* disc = app.add_subcommand("discretize", "discretize a continuous spec or sweep n");
  add_common(disc, config);
  auto* analyze = app.add_subcommand("analyze", "frame or resolution bounds");
  add_common(analyze, config);
  auto* recon = app.add_subcommand("reconstruct", "reconstruct a vector");
  add_common(recon, config);
  recon->add_option("--f", config.f, "vector to reconstruct (comma separated)")->delimiter(',');
  auto* verify = app.add_subcommand("verify", "run every applicable check");
  add_common(verify, config);
  auto* perturb = app.add_subcommand("perturb", "run the perturbation checks");
  add_common(perturb, config);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  for (const auto* cmd : app.get_subcommands()) {
    config.n_given = config.n_given || cmd->count("--n") > 0;
  }
  const Context ctx{config, out, err};
  try {
    if (gen->parsed()) return cmd_gen(ctx);
    if (disc->parsed()) return cmd_discretize(ctx);
    if (analyze->parsed()) return cmd_analyze(ctx);
    if (recon->parsed()) return cmd_reconstruct(ctx);
    if (verify->parsed()) return cmd_verify(ctx);
    if (perturb->parsed()) return cmd_perturb(ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace framekit::cli
