#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "nsm/analysis.hpp"
#include "nsm/dataset.hpp"

namespace cli {

struct CheckResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::string first_violation;  // empty when clean
  bool pass() const { return violations == 0; }
};

struct CheckSuiteResult {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
};

/// Runs the full invariant suite over the schedule on one grid: envelope
/// and interpolation identities, the three partition propositions, the
/// piecewise error identity, mass accounting, pointwise agreement-region
/// persistence, local error monotonicity across consecutive estimates, and
/// exact index-vs-scan agreement on seeded random queries.
CheckSuiteResult run_checks(const std::shared_ptr<const nsm::Dataset>& data,
                            nsm::Norm norm, const nsm::LipschitzSchedule& schedule,
                            nsm::GridSpec grid, std::size_t oracle_queries,
                            std::uint64_t seed);

void write_check_json(std::ostream& out, const CheckSuiteResult& result,
                      const nsm::Dataset& data, nsm::Norm norm,
                      const nsm::LipschitzSchedule& schedule, nsm::GridSpec grid,
                      std::size_t oracle_queries, std::uint64_t seed);

}  // namespace cli
