#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace qst {

inline constexpr const char* version_string = "0.1.0";

struct CommandResult {
    std::vector<Table> tables;
    bool validation_failed = false;
};

std::vector<std::string> subcommands();

CommandResult run_command(const RunConfig& cfg, const std::string& subcommand);

// Lines describing derived quantities, for output headers.
std::vector<std::string> derived_echo(const ModelParams& p);

// Header block written above every CSV table.
std::vector<std::string> provenance_header(const RunConfig& cfg, const std::string& subcommand);

}  // namespace qst
