#pragma once

#include <string>
#include <vector>

#include "harness.hpp"

namespace qst {

struct RunConfig {
    ModelParams model;
    std::vector<Engine> engines{Engine::exact};
    EngineOptions options;
    std::vector<double> eps_grid;      // sweep-eps axis, shifts, analytic alpha table
    std::vector<double> temperatures;  // sweep-eps temperatures, analytic optimum table
    std::vector<double> temp_grid;     // sweep-temp axis
    std::vector<double> epsilons;      // sweep-temp curves
    std::vector<double> chi_grid;      // crossing axis
    double fit_lo = 10.0, fit_hi = 300.0;
    std::string out_dir = ".";

    bool operator==(const RunConfig& o) const;
};

RunConfig default_config();

// key = value lines, '#' comments. Later assignments override earlier ones.
void parse_config_into(RunConfig& cfg, const std::string& text);
RunConfig parse_config(const std::string& text);

// One assignment; key is case-insensitive, '-' and '_' are interchangeable.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

void check_config(const RunConfig& cfg);

// Resolved configuration in the same key = value syntax.
std::string format_config(const RunConfig& cfg);

std::vector<std::string> config_keys();

}  // namespace qst
