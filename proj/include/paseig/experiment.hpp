#pragma once

#include <iosfwd>
#include <string>

#include "paseig/config.hpp"

namespace paseig {

// 17 significant digits, enough to round-trip a double exactly.
std::string fmt_g17(double v);

// Runs the experiment and writes eigenvalues.csv, convergence.csv,
// orthogonality.csv, timing.csv and report.json into output_dir (created if
// missing). Nothing is written anywhere else; on failure the files of this
// run are removed again. Returns the process exit code: 0 success, 2 bad
// configuration, 3 numerical failure.
int run_experiment(const ExperimentSpec& spec, const std::string& output_dir, std::ostream& log);

} // namespace paseig
