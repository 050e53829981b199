#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gapmm {

struct CheckRecord {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string detail;
};

// Flat pass/fail record shared by hypothesis, admissibility, and invariant
// checks.
struct VerificationReport {
  std::vector<CheckRecord> checks;

  void add(std::string name, bool pass, double value, std::string detail = {}) {
    checks.push_back({std::move(name), pass, value, std::move(detail)});
  }

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  const CheckRecord* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

}  // namespace gapmm
