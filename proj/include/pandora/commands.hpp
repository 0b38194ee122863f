#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 input, configuration or usage error.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pandora {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInputError = 2;

enum class OutputFormat { kText, kJsonLines, kCsv };

OutputFormat parse_output_format(const std::string& name);

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::vector<std::string> suites;  // oracle, propriety, gradient, amnesia, decomposition, all
  std::uint64_t seed = 0;
  std::size_t samples = 200000;
  std::string alpha;  // empty selects each suite's default alpha set
};

std::vector<CheckResult> run_verify(const VerifyOptions& opts);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pandora
