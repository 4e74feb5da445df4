#pragma once

#include <string>

#include "randboot/config.hpp"

namespace randboot::cli {

// Unconditional run: writes pvalues.csv, report.json, meta.json.
int cmd_run(const RunConfig& config);

// Double-layer run: writes panel.csv, fanchart.csv, report.json, meta.json.
int cmd_fanchart(const RunConfig& config);

// Local power curve over config.power.b_values: writes power.csv, meta.json.
int cmd_power(const RunConfig& config);

// Oracle/determinism self-checks; prints one line per check. Returns 0 only
// if every check passes. `corrupt` deliberately biases the named check.
int cmd_selftest(const std::string& corrupt = "");

// Full command-line interface. Exit codes: 0 success, 1 runtime failure,
// 2 configuration or usage error.
int main_entry(int argc, char** argv);

}  // namespace randboot::cli
