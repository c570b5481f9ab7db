#pragma once

// JSON formats for instances and reports.
//
// Doubles are written with 17 significant digits, -0 as 0, and non-finite
// values as null, so writing the same value twice gives the same bytes and
// parsing a written file reproduces every double exactly. Matrices are
// row-major nested arrays; complex entries are [re, im] pairs and the file
// carries "field": "complex".

#include "framekit/fusion_frame.hpp"
#include "framekit/perturbation.hpp"
#include "framekit/report.hpp"
#include "framekit/resolution.hpp"
#include "framekit/scenarios.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace framekit::io {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g, with -0 printed as 0.
std::string format_double(double value);

/// Stable text form: objects keep insertion order, arrays of scalars stay
/// on one line, everything else is indented by two spaces.
std::string dump(const Json& value);

/// Throws ParseError with the parser message.
Json parse(const std::string& text);
Json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// True when the optional "field" member is "complex".
bool is_complex(const Json& doc);

template <typename Scalar>
Json to_json(const WeightedSubspaceFamily<Scalar>& family);
template <typename Scalar>
Json to_json(const OperatorFamily<Scalar>& family);
template <typename Scalar>
Json to_json(const PerturbationScenario<Scalar>& scenario);
Json to_json(const ContinuousSpec& spec);
Json to_json(const VerificationReport& report);
Json to_json(const FrameBounds& bounds);

template <typename Scalar>
Json vector_to_json(const Vector<Scalar>& v);
template <typename Scalar>
Vector<Scalar> vector_from_json(const Json& doc);

/// Basis vectors are rows of "basis". A basis that is not orthonormal to
/// 1e-10 is orthonormalized; a warning is appended when the change exceeds
/// 1e-8.
template <typename Scalar>
WeightedSubspaceFamily<Scalar> family_from_json(const Json& doc,
                                                std::vector<std::string>* warnings = nullptr);
template <typename Scalar>
OperatorFamily<Scalar> resolution_from_json(const Json& doc);
/// String members "base" and "perturbed" are paths relative to `base_dir`.
template <typename Scalar>
PerturbationScenario<Scalar> perturbation_from_json(const Json& doc,
                                                    const std::filesystem::path& base_dir = {});
ContinuousSpec continuous_from_json(const Json& doc);

enum class DocumentKind { fusion_frame, resolution, perturbation, continuous };

/// Classifies a document by its members: "space" (continuous), "base"
/// (perturbation), "operators" (resolution), otherwise a fusion frame.
DocumentKind classify(const Json& doc);

Json to_json(const Instance& instance);
/// Real instances only; complex documents raise ParseError.
Instance instance_from_json(const Json& doc, const std::filesystem::path& base_dir = {},
                            std::vector<std::string>* warnings = nullptr);
Instance load_instance(const std::filesystem::path& path,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace framekit::io
