// Acceptance suite: ten property and oracle checks over seeded instances.
// Prints one line per criterion and exits nonzero if any fails.

#include "cli.hpp"
#include "framekit/random.hpp"
#include "framekit/scenarios.hpp"
#include "framekit/serialization.hpp"
#include "framekit/theorems.hpp"
#include "oracles.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace framekit;
namespace fs = std::filesystem;

// Pinned contract tolerances.
constexpr double kQuotientSlack = 1e-9;
constexpr double kOracleAgreement = 1e-8;
constexpr double kLimitError = 1e-6;
constexpr double kRoundoffFloor = 1e-13;
constexpr double kReconstruction = 1e-8;
constexpr double kTightReconstruction = 1e-12;
constexpr double kMaxCondition = 1e6;
constexpr double kBoundSlack = 1e-9;
constexpr double kExactProjectorR = 1e-12;
constexpr double kOrderingAgreement = 1e-9;
constexpr double kIdentity = 1e-9;

constexpr double kBudgetFrames = 30.0;
constexpr double kBudgetDiscretization = 1.0;
constexpr double kBudgetReconstruction = 5.0;

struct Outcome {
  bool passed = true;
  std::string summary;
  double budget = 0.0;  // seconds, 0 = none
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string ratio(int good, int total) { return std::to_string(good) + "/" + std::to_string(total); }

// Smallest and largest eigenvalue of the compression Q* A Q, by the oracle.
template <typename Scalar>
std::pair<double, double> compressed_extremes(const Operator<Scalar>& a, const Operator<Scalar>& q) {
  const auto lam = oracle::eigenvalues(Operator<Scalar>(q.adjoint() * a * q));
  return {lam.front(), lam.back()};
}

// ---------------------------------------------------------------------------

Outcome frame_bounds_criterion() {
  Rng rng(0xacce5501);
  int good = 0;
  double worst_gap = 0.0, worst_excess = -1e300;
  for (int k = 0; k < 200; ++k) {
    const Index dim = static_cast<Index>(rng.uniform_index(1, 8));
    const auto fam = random_frame<double>(rng, dim, rng.uniform_index(1, 12));
    const auto b = frame_bounds(fam);
    const auto ref = oracle::eigenvalues(oracle::frame_operator(fam));
    const double gap = std::max(std::abs(b.lower - std::max(0.0, ref.front())), std::abs(b.upper - ref.back()));
    bool ok = gap <= kOracleAgreement;
    worst_gap = std::max(worst_gap, gap);
    for (int p = 0; p < 1000; ++p) {
      const Vector<double> f = random_unit_vector<double>(rng, dim);
      const double q = frame_quadratic_form(fam, f);
      const double direct = oracle::frame_sum(fam, f);
      const double excess = std::max(b.lower - q, q - b.upper);
      worst_excess = std::max(worst_excess, excess);
      ok = ok && excess <= kQuotientSlack && std::abs(q - direct) <= kOracleAgreement;
    }
    good += ok ? 1 : 0;
  }
  return {good == 200,
          ratio(good, 200) + " frames; max spectral-oracle gap " + sci(worst_gap) +
              ", max quotient excess " + sci(worst_excess),
          kBudgetFrames};
}

Outcome discretization_criterion() {
  const double half_pi = std::numbers::pi / 2.0;
  const std::vector<std::size_t> ns{8, 16, 32, 64};
  const auto rows = sweep_discretization("rotating_line", ns);
  bool ok = std::abs(rows.back().lower - half_pi) <= kLimitError &&
            std::abs(rows.back().upper - half_pi) <= kLimitError;
  // midpoint integrates the rotating line exactly, so the errors sit at
  // roundoff: accept a non-increase or both values under the floor.
  const auto settles = [](double prev, double next) {
    return next <= prev || (prev <= kRoundoffFloor && next <= kRoundoffFloor);
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double e = std::max(*rows[i].lower_error, *rows[i].upper_error);
    worst = std::max(worst, e);
    if (i > 0) {
      ok = ok && settles(*rows[i - 1].lower_error, *rows[i].lower_error) &&
           settles(*rows[i - 1].upper_error, *rows[i].upper_error);
    }
  }
  // a scenario with a nonzero quadrature error must decrease strictly
  const auto quarter = sweep_discretization("quarter_turn_line", ns);
  bool strict = true;
  for (std::size_t i = 1; i < quarter.size(); ++i) {
    strict = strict && *quarter[i].lower_error < *quarter[i - 1].lower_error &&
             *quarter[i].upper_error < *quarter[i - 1].upper_error;
  }
  return {ok && strict,
          "rotating_line |A(64)-pi/2| " + sci(*rows.back().lower_error) + ", |B(64)-pi/2| " +
              sci(*rows.back().upper_error) + ", max error over sweep " + sci(worst) +
              "; quarter_turn_line errors " + sci(*quarter.front().lower_error) + " -> " +
              sci(*quarter.back().lower_error) + (strict ? " strictly decreasing" : " NOT decreasing"),
          kBudgetDiscretization};
}

Outcome reconstruction_criterion() {
  Rng rng(0xacce5501);  // same frames as the bound criterion
  Rng probes(0xacce5503);
  int frames = 0, good = 0;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Index dim = static_cast<Index>(rng.uniform_index(1, 8));
    const auto fam = random_frame<double>(rng, dim, rng.uniform_index(1, 12));
    for (int p = 0; p < 1000; ++p) random_unit_vector<double>(rng, dim);  // keep the stream aligned
    const auto b = frame_bounds(fam);
    if (!b.is_frame() || b.condition_number() > kMaxCondition) continue;
    ++frames;
    bool ok = true;
    for (int j = 0; j < 20; ++j) {
      const Vector<double> f = random_gaussian_vector<double>(probes, dim);
      const auto r = reconstruct(fam, f);
      const double rel = (r.value - f).norm() / f.norm();
      worst = std::max(worst, rel);
      ok = ok && rel <= kReconstruction;
    }
    good += ok ? 1 : 0;
  }
  std::vector<WeightedSubspaceFamily<double>> tight{axes_family<double>(5), mercedes_family<double>(),
                                                    axes_family<double>(3, 2.0, 0.25),
                                                    discretize_family(scenario_spec("rotating_line", 64))};
  double worst_tight = 0.0;
  for (const auto& fam : tight) {
    for (int j = 0; j < 20; ++j) {
      const Vector<double> f = random_gaussian_vector<double>(probes, fam.ambient_dim());
      worst_tight = std::max(worst_tight, (reconstruct(fam, f).value - f).norm() / f.norm());
    }
  }
  return {good == frames && frames > 0 && worst_tight <= kTightReconstruction,
          ratio(good, frames) + " frames with B/A <= 1e6, max relative residual " + sci(worst) +
              "; tight frames max " + sci(worst_tight),
          kBudgetReconstruction};
}

Outcome induced_frame_criterion() {
  Rng rng(0xacce5504);
  int good = 0, report_good = 0;
  double tightest = 1e300;
  for (int k = 0; k < 100; ++k) {
    const Index dim = static_cast<Index>(rng.uniform_index(1, 6));
    const auto fam = random_weighted_resolution<double>(rng, dim, rng.uniform_index(1, 8));
    const auto report = verify_induced_frame(fam);
    report_good += report.passed() ? 1 : 0;
    // oracle: D, R and the induced bounds from loop-assembled operators
    const auto induced = induced_family(fam);
    const double d = oracle::eigenvalues(oracle::resolution_gram(fam)).back();
    Operator<double> rr = Operator<double>::Zero(dim, dim);
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const Operator<double> diff = induced.subspace(i).projector() - fam.op(i);
      rr += fam.weighted_mass(i) * diff.transpose() * diff;
    }
    const double r = std::max(0.0, oracle::eigenvalues(rr).back());
    const auto lam = oracle::eigenvalues(oracle::frame_operator(induced));
    const double predicted = d * std::pow(1.0 + std::sqrt(r / d), 2);
    tightest = std::min(tightest, predicted - lam.back());
    good += (lam.front() > 0.0 && lam.back() <= predicted + kBoundSlack) ? 1 : 0;
  }
  int exact_good = 0;
  double worst_r = 0.0, worst_gap = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto fam = exact_projector_resolution<double>(rng, static_cast<Index>(rng.uniform_index(1, 6)),
                                                        rng.uniform_index(1, 3));
    const auto report = verify_induced_frame(fam);
    const double r = report.constant("R");
    const double gap = std::abs(report.constant("predicted_upper") - report.constant("D"));
    worst_r = std::max(worst_r, r);
    worst_gap = std::max(worst_gap, gap);
    exact_good += (report.passed() && r <= kExactProjectorR && gap <= kBoundSlack) ? 1 : 0;
  }
  return {good == 100 && report_good == 100 && exact_good == 20,
          ratio(good, 100) + " oracle, " + ratio(report_good, 100) + " reports; min slack of B bound " +
              sci(tightest) + "; exact projectors " + ratio(exact_good, 20) + " (max R " + sci(worst_r) +
              ", max |bound - D| " + sci(worst_gap) + ")"};
}

Outcome converse_criterion() {
  Rng rng(0xacce5505);
  int lower = 0, upper = 0, reports = 0, literal_fail = 0;
  for (int k = 0; k < 100; ++k) {
    const auto inst = random_converse_instance<double>(rng, static_cast<Index>(rng.uniform_index(1, 6)),
                                                       rng.uniform_index(1, 8));
    const auto report = verify_converse_bounds(inst.frame, inst.family);
    reports += report.passed() ? 1 : 0;
    const double d = oracle::eigenvalues(oracle::frame_operator(inst.frame)).back();
    double e = 0.0;
    for (const auto& t : inst.family.operators()) e = std::max(e, oracle::operator_norm(t));
    const auto m = oracle::eigenvalues(oracle::resolution_gram(inst.family));
    lower += (1.0 / d - kBoundSlack <= m.front()) ? 1 : 0;
    upper += (m.back() <= d * e * e + kBoundSlack) ? 1 : 0;
    const Check* literal = report.find("lambda_max(M) <= D E (literal form)");
    literal_fail += (literal != nullptr && !literal->passed) ? 1 : 0;
  }
  return {lower == 100 && upper == 100 && reports == 100,
          "lower 1/D " + ratio(lower, 100) + ", upper D E^2 " + ratio(upper, 100) + ", reports " +
              ratio(reports, 100) + "; literal D E form flagged failing on " + ratio(literal_fail, 100)};
}

Outcome sequence_and_countable_criterion() {
  Rng rng(0xacce5506);
  int contained = 0, reports = 0;
  for (int k = 0; k < 50; ++k) {
    const Index dim = static_cast<Index>(rng.uniform_index(2, 5));
    const auto inst = random_frame_sequence_instance<double>(rng, dim, k % 2 == 1);
    const auto report = verify_induced_frame_sequence<double>(inst.family, inst.sequence);
    reports += report.passed() ? 1 : 0;
    // oracle: orthonormal basis of the span, sequence bounds and the g_ij bounds on it
    const auto span = orthonormal_basis<double>(inst.sequence, dim);
    Operator<double> seq = Operator<double>::Zero(dim, dim), ind = Operator<double>::Zero(dim, dim);
    for (const auto& f : inst.sequence) {
      seq += f * f.transpose();
      for (std::size_t j = 0; j < inst.family.size(); ++j) {
        const Vector<double> g = std::sqrt(inst.family.weighted_mass(j)) * inst.family.op(j).transpose() * f;
        ind += g * g.transpose();
      }
    }
    const auto [as, bs] = compressed_extremes(seq, span.basis());
    const auto [il, iu] = compressed_extremes(ind, span.basis());
    const auto m = oracle::eigenvalues(oracle::resolution_gram(inst.family));
    contained += (il >= as * m.front() - kBoundSlack && iu <= bs * m.back() + kBoundSlack) ? 1 : 0;
  }
  int recon = 0;
  double worst_err = 0.0, worst_agree = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Index dim = static_cast<Index>(rng.uniform_index(1, 5));
    const auto fam = random_raw_resolution<double>(rng, dim, rng.uniform_index(1, 8));
    Vector<double> f = random_gaussian_vector<double>(rng, dim);
    if (k % 3 == 0 && dim > 1) f(static_cast<Index>(rng.uniform_index(0, std::size_t(dim) - 1))) = 0.0;
    const auto c = countable_reconstruction(fam, f);
    const double e1 = (c.inverse_first - f).norm() / f.norm();
    const double e2 = (c.inverse_last - f).norm() / f.norm();
    const double agree = (c.inverse_first - c.inverse_last).norm() / f.norm();
    worst_err = std::max({worst_err, e1, e2});
    worst_agree = std::max(worst_agree, agree);
    recon += (c.report.passed() && e1 <= kReconstruction && e2 <= kReconstruction &&
              agree <= kOrderingAgreement)
                 ? 1
                 : 0;
  }
  return {contained == 50 && reports == 50 && recon == 50,
          "induced family " + ratio(contained, 50) + " oracle, " + ratio(reports, 50) +
              " reports; reconstruction " + ratio(recon, 50) + " (max relative error " + sci(worst_err) +
              ", max ordering gap " + sci(worst_agree) + ")"};
}

Outcome perturbation_operator_criterion() {
  Rng rng(0xacce5507);
  int good = 0, exhaustive = 0;
  double worst_gap = -1e300, worst_recon = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto sc = random_perturbation<double>(rng, static_cast<Index>(rng.uniform_index(1, 5)),
                                                rng.uniform_index(1, 8));
    const auto op = build_perturbation_operator(sc.base, sc.perturbed, sc.lambda);
    exhaustive += op.exhaustive ? 1 : 0;
    const Index dim = sc.base.ambient_dim();
    Operator<double> s = Operator<double>::Zero(dim, dim);
    for (const auto& t : sc.perturbed.operators()) s += t;
    const double gap = oracle::operator_norm(Operator<double>(Operator<double>::Identity(dim, dim) - s));
    worst_gap = std::max(worst_gap, gap - sc.lambda);
    const Operator<double> s_inv = s.partialPivLu().inverse();
    Operator<double> recon = Operator<double>::Zero(dim, dim);
    for (const auto& t : sc.perturbed.operators()) recon += t * s_inv;
    double r = 0.0;
    for (Index e = 0; e < dim; ++e) r = std::max(r, (recon.col(e) - canonical_vector<double>(dim, e)).norm());
    worst_recon = std::max(worst_recon, r);
    good += (op.exhaustive && op.report.passed() && gap <= sc.lambda + kBoundSlack && r <= kIdentity) ? 1 : 0;
  }
  return {good == 100,
          ratio(good, 100) + " (exhaustive subset checks " + ratio(exhaustive, 100) + "); max ||id - S|| - lambda " +
              sci(worst_gap) + ", max reconstruction residual " + sci(worst_recon)};
}

Outcome perturbed_resolution_criterion() {
  Rng rng(0xacce5508);
  int good = 0;
  double min_lower_slack = 1e300, min_upper_slack = 1e300;
  for (int k = 0; k < 100; ++k) {
    const auto sc = random_perturbation<double>(rng, static_cast<Index>(rng.uniform_index(1, 5)),
                                                rng.uniform_index(1, 8));
    const auto report = verify_perturbed_resolution(sc.base, sc.perturbed, sc.params, sc.lambda);
    const Index dim = sc.base.ambient_dim();
    Operator<double> s = Operator<double>::Zero(dim, dim);
    for (const auto& t : sc.perturbed.operators()) s += t;
    const auto fam = perturbed_family(sc.perturbed, Operator<double>(s.partialPivLu().inverse()));
    const auto lam = oracle::eigenvalues(oracle::resolution_gram(fam));
    const double lo = report.constant("predicted_lower"), hi = report.constant("predicted_upper");
    min_lower_slack = std::min(min_lower_slack, lam.front() - lo);
    min_upper_slack = std::min(min_upper_slack, hi - lam.back());
    good += (report.passed() && lam.front() >= lo - kBoundSlack && lam.back() <= hi + kBoundSlack) ? 1 : 0;
  }
  int degenerate = 0;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto t = random_raw_resolution<double>(rng, static_cast<Index>(rng.uniform_index(1, 5)),
                                                 rng.uniform_index(1, 8));
    const auto m = oracle::eigenvalues(oracle::resolution_gram(t));
    const auto report = verify_perturbed_resolution(t, t, PerturbationParams::trivial(t.atoms()), 0.0);
    const double err = std::max(std::abs(report.constant("C_perturbed") - m.front()),
                                std::abs(report.constant("D_perturbed") - m.back()));
    worst = std::max(worst, err);
    degenerate += (report.passed() && err <= kBoundSlack) ? 1 : 0;
  }
  return {good == 100 && degenerate == 20,
          ratio(good, 100) + " contained (min slack lower " + sci(min_lower_slack) + ", upper " +
              sci(min_upper_slack) + "); degenerate " + ratio(degenerate, 20) + " reproduce [C, D] to " +
              sci(worst)};
}

Outcome composite_criterion() {
  Rng rng(0xacce5509);
  int good = 0;
  double min_margin = 1e300;
  for (int k = 0; k < 100; ++k) {
    const auto sc = random_composite_perturbation<double>(rng, static_cast<Index>(rng.uniform_index(1, 5)),
                                                          rng.uniform_index(1, 4));
    const auto report = verify_composite_perturbation(sc.base, sc.perturbed, sc.params, sc.lambda);
    const Check* lower = report.find("lower bound with E (1 + sqrt(lambda2)) on probes");
    const Check* resolution = report.find("perturbed family is a resolution");
    // exact form of the probe check: sqrt(lambda_min) of the perturbed gram
    const double floor = std::sqrt(std::max(0.0, oracle::eigenvalues(oracle::resolution_gram(sc.perturbed)).front()));
    min_margin = std::min(min_margin, floor - report.constant("asserted_lower"));
    good += (report.passed() && lower && lower->passed && resolution && resolution->passed &&
             floor >= report.constant("asserted_lower") - kBoundSlack)
                ? 1
                : 0;
  }
  return {good == 100, ratio(good, 100) + " (min margin of the asserted lower bound " + sci(min_margin) + ")"};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int spawn(const std::string& args, std::string* out = nullptr) {
  const std::string cmd = std::string(FRAMEKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return -1;
  std::string text;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
  const int status = pclose(pipe);
  if (out) *out = std::move(text);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism_criterion() {
  const fs::path dir = fs::temp_directory_path() / "framekit_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  int identical = 0, round_trips = 0, total = 0;
  for (const auto& s : scenario_registry()) {
    ++total;
    const std::string a = (dir / (s.name + ".a.json")).string();
    const std::string b = (dir / (s.name + ".b.json")).string();
    const std::string common = "gen --scenario " + s.name + " --seed 20240601 --dim 4 --atoms 5 --out ";
    if (spawn(common + a) == 0 && spawn(common + b) == 0 && slurp(a) == slurp(b) && !slurp(a).empty()) ++identical;
    try {
      if (io::dump(io::to_json(io::load_instance(a))) == slurp(a)) ++round_trips;
    } catch (const std::exception&) {
    }
  }
  struct Fixture {
    std::string args;
    int expected;
  };
  const std::string fx = FRAMEKIT_FIXTURE_DIR;
  const std::vector<Fixture> fixtures{
      {"verify " + fx + "/pass_resolution.json", cli::kPass},
      {"verify " + fx + "/fail_resolution.json", cli::kCheckFailed},
      {"perturb " + fx + "/pass_perturbation.json", cli::kPass},
      {"perturb " + fx + "/fail_perturbation.json", cli::kCheckFailed},
      {"verify " + fx + "/malformed.json", cli::kUsageError},
      {"verify " + fx + "/negative_mass.json", cli::kUsageError},
      {"discretize --scenario axes", cli::kUsageError},
      {"analyze " + fx + "/rotating_line.json", cli::kPass},
  };
  int codes = 0;
  std::string mismatches;
  for (const auto& f : fixtures) {
    const int code = spawn(f.args);
    if (code == f.expected) {
      ++codes;
    } else {
      mismatches += " [" + f.args + " -> " + std::to_string(code) + "]";
    }
  }
  fs::remove_all(dir);
  return {identical == total && round_trips == total && codes == int(fixtures.size()),
          "byte-identical regeneration " + ratio(identical, total) + ", gen/load/serialize identity " +
              ratio(round_trips, total) + ", exit codes " + ratio(codes, int(fixtures.size())) + mismatches};
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"frame bounds vs Rayleigh quotients", frame_bounds_criterion},
      {"discretization convergence", discretization_criterion},
      {"reconstruction", reconstruction_criterion},
      {"induced fusion frame", induced_frame_criterion},
      {"converse bounds", converse_criterion},
      {"induced frame sequence and countable reconstruction", sequence_and_countable_criterion},
      {"perturbation operator", perturbation_operator_criterion},
      {"perturbed resolution bounds", perturbed_resolution_criterion},
      {"composite perturbation lower bound", composite_criterion},
      {"determinism, round trip and exit codes", determinism_criterion},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = sci(secs) + " s";
    if (o.budget > 0.0) {
      timing += " of " + sci(o.budget) + " s budget";
      if (secs > o.budget) {
        o.passed = false;
        timing += " EXCEEDED";
      }
    }
    failed += o.passed ? 0 : 1;
    std::cout << "criterion " << (i + 1) << " " << (o.passed ? "PASS" : "FAIL") << "  " << criteria[i].title
              << ": " << o.summary << "  [" << timing << "]" << std::endl;
  }
  std::cout << (criteria.size() - std::size_t(failed)) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
