#include "framekit/measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace framekit {

namespace {

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == ',')) {
      ++pos;
    }
    if (pos >= text.size()) {
      break;
    }
    double value = 0.0;
    const auto* first = text.data() + pos;
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc()) {
      throw std::invalid_argument("malformed number list: " + std::string(text));
    }
    out.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << (i ? "," : "") << values[i];
  }
  return os.str();
}

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], by
// Newton iteration on the three-term recurrence.
void gauss_legendre_nodes(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        const double kk = static_cast<double>(k);
        p0 = ((2.0 * kk + 1.0) * z * p1 - kk * p2) / (kk + 1.0);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) <= 1e-16) {
        break;
      }
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double p2 = p1;
      p1 = p0;
      const double kk = static_cast<double>(k);
      p0 = ((2.0 * kk + 1.0) * z * p1 - kk * p2) / (kk + 1.0);
    }
    dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    w[n - 1 - i] = w[i];
  }
  if (n % 2 == 1) {
    x[n / 2] = 0.0;
  }
}

AtomicMeasure uniform_midpoint(double a, double length, std::size_t n) {
  const double h = length / static_cast<double>(n);
  std::vector<double> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    points[i] = a + (static_cast<double>(i) + 0.5) * h;
  }
  return AtomicMeasure(std::move(points), std::vector<double>(n, h));
}

}  // namespace

ParameterSpace ParameterSpace::finite(std::vector<double> labels) {
  if (labels.empty()) {
    throw std::invalid_argument("finite parameter space needs at least one label");
  }
  return ParameterSpace(FiniteSpace{std::move(labels)});
}

ParameterSpace ParameterSpace::interval(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("interval requires finite a < b");
  }
  return ParameterSpace(IntervalSpace{a, b});
}

ParameterSpace ParameterSpace::circle(double period) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument("circle requires a positive period");
  }
  return ParameterSpace(CircleSpace{period});
}

double ParameterSpace::length() const {
  if (const auto* iv = std::get_if<IntervalSpace>(&kind_)) {
    return iv->b - iv->a;
  }
  if (const auto* c = std::get_if<CircleSpace>(&kind_)) {
    return c->period;
  }
  throw std::logic_error("finite parameter space has no length");
}

AtomicMeasure::AtomicMeasure(std::vector<double> points, std::vector<double> masses)
    : points_(std::move(points)), masses_(std::move(masses)) {
  if (points_.size() != masses_.size()) {
    throw std::invalid_argument("atom points and masses differ in length");
  }
  if (points_.empty()) {
    throw std::invalid_argument("atomic measure needs at least one atom");
  }
  for (double m : masses_) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw std::invalid_argument("atom masses must be positive and finite");
    }
  }
  std::set<double> seen;
  for (double p : points_) {
    if (!seen.insert(p).second) {
      throw std::invalid_argument("atom points must be distinct");
    }
  }
}

AtomicMeasure AtomicMeasure::counting(std::size_t n) {
  std::vector<double> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    points[i] = static_cast<double>(i);
  }
  return AtomicMeasure(std::move(points), std::vector<double>(n, 1.0));
}

double AtomicMeasure::total_mass() const noexcept {
  double total = 0.0;
  for (double m : masses_) {
    total += m;
  }
  return total;
}

std::string_view to_string(QuadratureRule rule) {
  switch (rule) {
    case QuadratureRule::midpoint:
      return "midpoint";
    case QuadratureRule::trapezoid:
      return "trapezoid";
    case QuadratureRule::gauss_legendre:
      return "gauss_legendre";
  }
  return "unknown";
}

QuadratureRule parse_quadrature_rule(std::string_view name) {
  if (name == "midpoint") return QuadratureRule::midpoint;
  if (name == "trapezoid") return QuadratureRule::trapezoid;
  if (name == "gauss_legendre") return QuadratureRule::gauss_legendre;
  throw std::invalid_argument("unknown quadrature rule: " + std::string(name));
}

AtomicMeasure discretize(const ParameterSpace& space, const DiscretizationScheme& scheme) {
  if (scheme.n == 0) {
    throw std::invalid_argument("discretization needs n >= 1");
  }
  const std::size_t n = scheme.n;
  if (const auto* c = std::get_if<CircleSpace>(&space.kind())) {
    // Periodic integrands: the uniform grid is used whatever rule is named.
    return uniform_midpoint(0.0, c->period, n);
  }
  const auto* iv = std::get_if<IntervalSpace>(&space.kind());
  if (iv == nullptr) {
    throw std::invalid_argument("finite parameter space is already atomic");
  }
  const double a = iv->a;
  const double length = iv->b - iv->a;
  switch (scheme.rule) {
    case QuadratureRule::midpoint:
      return uniform_midpoint(a, length, n);
    case QuadratureRule::trapezoid: {
      if (n == 1) {
        // A single trapezoid node degenerates to the midpoint.
        return uniform_midpoint(a, length, 1);
      }
      const double h = length / static_cast<double>(n - 1);
      std::vector<double> points(n);
      std::vector<double> masses(n, h);
      for (std::size_t i = 0; i < n; ++i) {
        points[i] = a + static_cast<double>(i) * h;
      }
      points[n - 1] = iv->b;
      masses.front() = 0.5 * h;
      masses.back() = 0.5 * h;
      return AtomicMeasure(std::move(points), std::move(masses));
    }
    case QuadratureRule::gauss_legendre: {
      std::vector<double> x;
      std::vector<double> w;
      gauss_legendre_nodes(n, x, w);
      const double half = 0.5 * length;
      const double mid = a + half;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = mid + half * x[i];
        w[i] *= half;
      }
      return AtomicMeasure(std::move(x), std::move(w));
    }
  }
  throw std::logic_error("unhandled quadrature rule");
}

double integrate(const AtomicMeasure& m, const std::function<double(double)>& g) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    total += g(m.point(i)) * m.mass(i);
  }
  return total;
}

WeightFunction::WeightFunction(Evaluator evaluator, std::string description)
    : evaluator_(std::move(evaluator)), description_(std::move(description)) {
  if (!evaluator_) {
    throw std::invalid_argument("weight function needs an evaluator");
  }
}

WeightFunction WeightFunction::constant(double c) {
  std::ostringstream os;
  os.precision(17);
  os << "const:" << c;
  return WeightFunction([c](double, std::size_t) { return c; }, os.str());
}

WeightFunction WeightFunction::polynomial(std::vector<double> coefficients) {
  std::string desc = "poly:" + format_list(coefficients);
  return WeightFunction(
      [coeffs = std::move(coefficients)](double x, std::size_t) {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
          acc = acc * x + *it;
        }
        return acc;
      },
      std::move(desc));
}

WeightFunction WeightFunction::sine() {
  return WeightFunction([](double x, std::size_t) { return std::sin(x); }, "sin");
}

WeightFunction WeightFunction::table(std::vector<double> values) {
  std::string desc = "table:[" + format_list(values) + "]";
  return WeightFunction(
      [vals = std::move(values)](double, std::size_t i) {
        if (i >= vals.size()) {
          throw std::out_of_range("weight table has no entry for atom " + std::to_string(i));
        }
        return vals[i];
      },
      std::move(desc));
}

WeightFunction WeightFunction::parse(std::string_view spec) {
  if (spec == "sin") {
    return sine();
  }
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("unknown weight spec: " + std::string(spec));
  }
  const std::string_view key = spec.substr(0, colon);
  std::string_view body = spec.substr(colon + 1);
  if (key == "const") {
    const auto values = parse_number_list(body);
    if (values.size() != 1) {
      throw std::invalid_argument("const weight needs exactly one value");
    }
    return constant(values.front());
  }
  if (key == "poly") {
    auto values = parse_number_list(body);
    if (values.empty()) {
      throw std::invalid_argument("poly weight needs coefficients");
    }
    return polynomial(std::move(values));
  }
  if (key == "table") {
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
      throw std::invalid_argument("table weight must look like table:[v0,v1,...]");
    }
    return table(parse_number_list(body.substr(1, body.size() - 2)));
  }
  throw std::invalid_argument("unknown weight spec: " + std::string(spec));
}

SampledWeights sample_weights(const WeightFunction& omega, const AtomicMeasure& m) {
  SampledWeights out;
  out.values.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = omega(m.point(i), i);
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream os;
      os << "weight " << omega.description() << " is negative at atom " << i << " (value " << v
         << ")";
      throw std::domain_error(os.str());
    }
    if (v == 0.0) {
      out.zero_atoms.push_back(i);
    }
    out.values.push_back(v);
  }
  return out;
}

}  // namespace framekit
