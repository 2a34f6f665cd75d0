#pragma once

#include <string>
#include <vector>

namespace dfrac {

/// One measured deviation against its tolerance. NaN never passes.
struct Measurement {
  std::string label;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed() const { return measured <= tolerance; }
};

/// A named verification made of measurements plus boolean conditions.
struct CheckResult {
  std::string id;
  std::string name;
  std::vector<Measurement> measurements;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  double seconds = 0.0;

  void measure(std::string label, double measured, double tolerance);
  /// Records `what` as a failure when `condition` is false.
  void require(bool condition, std::string what);
  void note(std::string text) { notes.push_back(std::move(text)); }
  void merge(const CheckResult& other);
  bool passed() const;
  /// "PASS <id> <name>: label measured <= tol; ..." on one line.
  std::string summary() const;
};

}  // namespace dfrac
