#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qmi {

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  std::string id;
  std::string description;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool ok() const;
  const CheckResult* find(std::string_view id) const;
};

/// IDs of the checks run at `level`, in execution order. Full is a superset of Fast.
std::vector<std::string> verify_check_ids(VerifyLevel level);

/// Runs the self-verification suite. When `only` is nonempty just those IDs
/// run. Each result is streamed to `progress` as it completes.
VerifyReport run_verify(VerifyLevel level, std::ostream* progress = nullptr,
                        std::span<const std::string> only = {});

void print_check(std::ostream& out, const CheckResult& check);

}  // namespace qmi
