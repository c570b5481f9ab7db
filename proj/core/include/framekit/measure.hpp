#pragma once

// Parameter spaces with positive measures. Finite atomic measures are used
// directly; 1-D continuous spaces are reduced to atomic measures by a
// quadrature rule.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace framekit {

struct FiniteSpace {
  std::vector<double> labels;
};

struct IntervalSpace {
  double a;
  double b;
};

struct CircleSpace {
  double period;
};

class ParameterSpace {
 public:
  using Kind = std::variant<FiniteSpace, IntervalSpace, CircleSpace>;

  static ParameterSpace finite(std::vector<double> labels);
  static ParameterSpace interval(double a, double b);
  static ParameterSpace circle(double period);

  const Kind& kind() const noexcept { return kind_; }
  bool is_continuous() const noexcept { return !std::holds_alternative<FiniteSpace>(kind_); }
  /// Lebesgue measure of a continuous space (length or period).
  double length() const;

 private:
  explicit ParameterSpace(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Finitely many atoms x_i with masses mu({x_i}) > 0.
class AtomicMeasure {
 public:
  AtomicMeasure(std::vector<double> points, std::vector<double> masses);

  /// Points 0, 1, ..., n-1 with unit mass.
  static AtomicMeasure counting(std::size_t n);

  std::size_t size() const noexcept { return points_.size(); }
  double point(std::size_t i) const { return points_.at(i); }
  double mass(std::size_t i) const { return masses_.at(i); }
  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  double total_mass() const noexcept;

  bool operator==(const AtomicMeasure&) const = default;

 private:
  std::vector<double> points_;
  std::vector<double> masses_;
};

enum class QuadratureRule { midpoint, trapezoid, gauss_legendre };

std::string_view to_string(QuadratureRule rule);
QuadratureRule parse_quadrature_rule(std::string_view name);

struct DiscretizationScheme {
  QuadratureRule rule = QuadratureRule::midpoint;
  std::size_t n = 1;
};

/// Replaces a continuous parameter space by n weighted nodes whose masses
/// sum to the length of the space. Finite spaces are rejected.
AtomicMeasure discretize(const ParameterSpace& space, const DiscretizationScheme& scheme);

/// Sum of g(x_i) mu({x_i}).
double integrate(const AtomicMeasure& m, const std::function<double(double)>& g);

/// Nonnegative weight omega evaluated at an atom (value, index).
class WeightFunction {
 public:
  using Evaluator = std::function<double(double, std::size_t)>;

  WeightFunction(Evaluator evaluator, std::string description);

  static WeightFunction constant(double c);
  /// c0 + c1 x + c2 x^2 + ...
  static WeightFunction polynomial(std::vector<double> coefficients);
  static WeightFunction sine();
  /// Value i is used at atom i.
  static WeightFunction table(std::vector<double> values);

  /// Registry keys: "const:c", "poly:c0,c1,...", "sin", "table:[v0,v1,...]".
  static WeightFunction parse(std::string_view spec);

  double operator()(double x, std::size_t index) const { return evaluator_(x, index); }
  const std::string& description() const noexcept { return description_; }

 private:
  Evaluator evaluator_;
  std::string description_;
};

struct SampledWeights {
  std::vector<double> values;
  /// Atoms where omega vanishes; kept in storage, excluded from frame sums.
  std::vector<std::size_t> zero_atoms;
};

/// Throws std::domain_error on a negative or non-finite value.
SampledWeights sample_weights(const WeightFunction& omega, const AtomicMeasure& m);

}  // namespace framekit
