#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace pqd::cli {

// Validates, computes and writes the CSV (and SVG) files of one subcommand; returns the paths written.
// Throws ConfigError for invalid parameters, pqd::Error for solver failures and IoError for output failures.
std::vector<std::string> run_command(const std::string& command, const Json& cfg);

std::string output_path(const Json& cfg, const std::string& stem, const std::string& ext);

}  // namespace pqd::cli
