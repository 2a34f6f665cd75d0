#include "dfrac/checks.hpp"

#include <cstdio>

namespace dfrac {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

void CheckResult::measure(std::string label, double measured, double tolerance) {
  measurements.push_back({std::move(label), measured, tolerance});
}

void CheckResult::require(bool condition, std::string what) {
  if (!condition) failures.push_back(std::move(what));
}

void CheckResult::merge(const CheckResult& other) {
  measurements.insert(measurements.end(), other.measurements.begin(), other.measurements.end());
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

bool CheckResult::passed() const {
  if (!failures.empty()) return false;
  for (const auto& m : measurements) {
    if (!m.passed()) return false;
  }
  return true;
}

std::string CheckResult::summary() const {
  std::string line = (passed() ? "PASS " : "FAIL ") + id + " " + name + ":";
  const char* sep = " ";
  for (const auto& m : measurements) {
    line += sep + m.label + " " + sci(m.measured) + (m.passed() ? " <= " : " > ") + sci(m.tolerance);
    sep = "; ";
  }
  for (const auto& f : failures) {
    line += sep + std::string("failed: ") + f;
    sep = "; ";
  }
  line += " (" + sci(seconds) + " s)";
  return line;
}

}  // namespace dfrac
