#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pmstar {

/// Outcome of one sampled property check.
struct CheckResult {
  CheckResult() = default;
  explicit CheckResult(std::string check_name) : name(std::move(check_name)) {}

  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  /// Trials that did not apply (e.g. an incomparable pair for a monotonicity
  /// check). Counted in `trials`.
  std::size_t skipped = 0;
  /// First failing case, rendered for humans.
  std::optional<std::string> counterexample;
  /// Named numeric margins (worst slack observed and similar).
  std::map<std::string, double> margins;
  std::string note;

  bool ok() const { return failures == 0; }
  std::size_t passed() const { return trials - failures - skipped; }

  /// Records one trial. `describe` is invoked only for the first failure.
  template <class Describe>
  void record(bool pass, Describe&& describe) {
    ++trials;
    if (pass) return;
    ++failures;
    if (!counterexample) counterexample = describe();
  }
  void record_skip() {
    ++trials;
    ++skipped;
  }
  /// Tracks the minimum of a slack quantity under `key`.
  void track_min(const std::string& key, double value) {
    auto [it, inserted] = margins.try_emplace(key, value);
    if (!inserted && value < it->second) it->second = value;
  }
  void track_max(const std::string& key, double value) {
    auto [it, inserted] = margins.try_emplace(key, value);
    if (!inserted && value > it->second) it->second = value;
  }
};

struct AxiomReport {
  std::string subject;
  std::vector<CheckResult> checks;

  bool ok() const {
    for (const auto& c : checks) {
      if (!c.ok()) return false;
    }
    return true;
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

}  // namespace pmstar
