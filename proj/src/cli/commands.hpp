#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace twophoton::cli {

// Runs one command and returns the names of the files written under `out`.
std::vector<std::string> run_command(const RunConfig& cfg, const std::filesystem::path& out);

// Full command line handling. Exit codes: 0 success, 1 other failure,
// 2 invalid arguments or config, 3 numerical precondition failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twophoton::cli
