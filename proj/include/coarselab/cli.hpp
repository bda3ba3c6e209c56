#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace coarselab {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes: 0 success, 2 schema/usage, 3 size cap, 4 failed invariant,
/// 5 truncation-dominated data, 1 anything else.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coarselab
