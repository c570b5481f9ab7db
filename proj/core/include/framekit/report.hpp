#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace framekit {

/// One named inequality or identity that was evaluated numerically.
struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

/// Per-statement record of hypotheses, conclusions and computed constants.
///
/// `conclusion_checked()` is derived, never stored: it is true only when
/// every hypothesis passed and every conclusion passed, so a report can
/// never claim a conclusion whose premises failed.
class VerificationReport {
 public:
  explicit VerificationReport(std::string theorem_id) : theorem_id_(std::move(theorem_id)) {}

  void add_hypothesis(std::string name, bool passed, double residual = 0.0, double tolerance = 0.0);
  void add_conclusion(std::string name, bool passed, double residual = 0.0, double tolerance = 0.0);
  /// Recorded but not part of the pass/fail decision.
  void add_diagnostic(std::string name, bool passed, double residual = 0.0, double tolerance = 0.0);
  void set_constant(const std::string& name, double value) { constants_[name] = value; }
  void set_tolerance(const std::string& name, double value) { tolerances_[name] = value; }
  void add_note(std::string note) { notes_.push_back(std::move(note)); }
  void set_mode(std::string mode) { mode_ = std::move(mode); }

  /// Copies the entries of `other` into this report under `prefix`.
  void absorb(const VerificationReport& other, const std::string& prefix);

  const std::string& theorem_id() const noexcept { return theorem_id_; }
  const std::optional<std::string>& mode() const noexcept { return mode_; }
  const std::vector<Check>& hypotheses() const noexcept { return hypotheses_; }
  const std::vector<Check>& conclusions() const noexcept { return conclusions_; }
  const std::vector<Check>& diagnostics() const noexcept { return diagnostics_; }
  const std::map<std::string, double>& constants() const noexcept { return constants_; }
  const std::map<std::string, double>& tolerances() const noexcept { return tolerances_; }
  const std::vector<std::string>& notes() const noexcept { return notes_; }

  double constant(const std::string& name) const;
  bool has_constant(const std::string& name) const { return constants_.contains(name); }
  const Check* find(const std::string& name) const;

  bool hypotheses_hold() const noexcept;
  bool conclusion_checked() const noexcept;
  bool passed() const noexcept { return conclusion_checked(); }

 private:
  std::string theorem_id_;
  std::optional<std::string> mode_;
  std::vector<Check> hypotheses_;
  std::vector<Check> conclusions_;
  std::vector<Check> diagnostics_;
  std::map<std::string, double> constants_;
  std::map<std::string, double> tolerances_;
  std::vector<std::string> notes_;
};

}  // namespace framekit
