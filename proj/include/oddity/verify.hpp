#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oddity {

struct CheckResult {
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;

  std::string id() const { return group + "/" + name; }
};

class CheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Comparison helpers handed to every check. A check whose id matches the
/// injected fault sees every measured value shifted, so its first comparison
/// fails; this exercises the failure path of the runner.
class CheckContext {
 public:
  explicit CheckContext(bool faulty = false) : faulty_(faulty) {}

  void expect_near(double got, double want, double abs_tol, const std::string& what) const;
  void expect_rel(double got, double want, double rel_tol, const std::string& what) const;
  void expect_true(bool condition, const std::string& what) const;
  void expect_in(double got, double lo, double hi, const std::string& what) const;

 private:
  double measured(double value) const { return faulty_ ? value + 1.0 : value; }
  bool faulty_;
};

struct Check {
  std::string group;
  std::string name;
  /// Returns a short summary of what was measured; throws CheckFailure.
  std::function<std::string(const CheckContext&)> run;

  std::string id() const { return group + "/" + name; }
};

/// Every registered check in execution order.
const std::vector<Check>& all_checks();

/// Comma-separated group names, full ids or id prefixes; empty selects all.
bool matches_filter(const Check& check, const std::string& filter);

struct VerifyOptions {
  std::string filter;
  /// Id (or prefix) of checks to run with perturbed measurements.
  std::string inject_fault;
  /// Checks are independent and run on this many threads; results keep
  /// registration order.
  int jobs = 1;
};

/// Runs the selected checks; exceptions other than CheckFailure also count
/// as failures. DomainError if the filter selects nothing.
std::vector<CheckResult> run_checks(const VerifyOptions& options = {},
                                    const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace oddity
