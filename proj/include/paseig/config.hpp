#pragma once

#include <iosfwd>
#include <string>

#include "paseig/driver.hpp"

namespace paseig {

enum class ReferenceMode { analytic, oracle, none };
enum class SweepMode { none, levels, finest_corrections };

// A full experiment description: the solver configuration plus reporting
// choices. Parsed from a line-oriented "key = value" file.
struct ExperimentSpec {
    SolverConfig solver;
    ReferenceMode reference = ReferenceMode::analytic;
    bool reference_set = false; // explicit in the config file
    SweepMode sweep = SweepMode::none;
    int sweep_from = 1;
    int sweep_to = 1;
    bool dump_meshes = false;
};

// Parses the config text. '#' starts a comment, blank lines are skipped,
// each remaining line must be "key = value". All problems are collected and
// thrown together as a ConfigError, each prefixed with its line number.
ExperimentSpec parse_config(const std::string& text);

ExperimentSpec quick_preset();

const char* reference_name(ReferenceMode m);
const char* sweep_name(SweepMode m);

// One-page summary of the resolved configuration (for `check`).
void print_config(const ExperimentSpec& spec, std::ostream& os);

// The key = value reference, shared by --help and the docs.
extern const char* const kConfigKeyHelp;

} // namespace paseig
