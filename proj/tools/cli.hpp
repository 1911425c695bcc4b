#pragma once

// Command-line front end. Exit codes: 0 success, 1 counterexample found,
// 2 usage or parse error, 3 resource cap, 4 diagnostic or budget failure.

#include <iosfwd>
#include <string>

namespace symjunta::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitDiagnostic = 4;

/// Environment variable that overrides the enumeration cap.
inline constexpr const char* kEnumCapVariable = "SYMJUNTA_ENUM_CAP";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// floor of a bound expression at k: an integer, "A*k/B", "Ak/B", "k",
/// or "C*k/ln(k)". Throws Error(parse) on anything else.
int evaluate_bound(const std::string& expr, int k);

}  // namespace symjunta::cli
