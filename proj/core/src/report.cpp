#include "framekit/report.hpp"

#include <algorithm>
#include <stdexcept>

namespace framekit {

void VerificationReport::add_hypothesis(std::string name, bool passed, double residual,
                                        double tolerance) {
  hypotheses_.push_back({std::move(name), passed, residual, tolerance});
}

void VerificationReport::add_conclusion(std::string name, bool passed, double residual,
                                        double tolerance) {
  conclusions_.push_back({std::move(name), passed, residual, tolerance});
}

void VerificationReport::add_diagnostic(std::string name, bool passed, double residual,
                                        double tolerance) {
  diagnostics_.push_back({std::move(name), passed, residual, tolerance});
}

void VerificationReport::absorb(const VerificationReport& other, const std::string& prefix) {
  for (const auto& [k, v] : other.constants_) {
    constants_[prefix + k] = v;
  }
  for (const auto& c : other.diagnostics_) {
    diagnostics_.push_back({prefix + c.name, c.passed, c.residual, c.tolerance});
  }
  for (const auto& n : other.notes_) {
    notes_.push_back(prefix + n);
  }
}

double VerificationReport::constant(const std::string& name) const {
  const auto it = constants_.find(name);
  if (it == constants_.end()) {
    throw std::out_of_range("report " + theorem_id_ + " has no constant " + name);
  }
  return it->second;
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const auto* list : {&hypotheses_, &conclusions_, &diagnostics_}) {
    const auto it =
        std::find_if(list->begin(), list->end(), [&](const Check& c) { return c.name == name; });
    if (it != list->end()) {
      return &*it;
    }
  }
  return nullptr;
}

bool VerificationReport::hypotheses_hold() const noexcept {
  return std::all_of(hypotheses_.begin(), hypotheses_.end(),
                     [](const Check& c) { return c.passed; });
}

bool VerificationReport::conclusion_checked() const noexcept {
  return hypotheses_hold() && !conclusions_.empty() &&
         std::all_of(conclusions_.begin(), conclusions_.end(),
                     [](const Check& c) { return c.passed; });
}

}  // namespace framekit
