#pragma once

#include "wcs/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace wcs::cli {

// Exit codes of the match command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFallback = 2;

// Reads graph_g.json, graph_h.json, params.json (L, alpha) and, when present,
// cost.csv and gt.json from an instance directory written by `generate`.
ProblemInstance load_instance_dir(const std::filesystem::path& dir);

// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace wcs::cli
