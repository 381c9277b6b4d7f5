#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "permmap/cli/config.hpp"

namespace permmap::cli {

/// Exit statuses. 0 means every requested output was written.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // data, solver, or IO failure
inline constexpr int kExitUsage = 2;    // bad command line or config

int cmd_summarize(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_embed(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace permmap::cli
