// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief Command-line front end.
 *
 * Subcommands: spectrum, gap-scan, jeff-scan, busgate, wstate, error-scan,
 * bounds, serial.  Options are shared by all subcommands and may also come
 * from a key=value file given with --config; command-line flags win.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinbus {

inline constexpr const char* kOutputSchema = "spinbus.output.v1";

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitClaim = 4,
};

/// Runs one subcommand.  `args` excludes the program name.  Data goes to
/// `out` unless an output directory is set; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// printf("%.12g") with "inf"/"-inf"/"nan" spelled out.
std::string format_number(double x);

}  // namespace spinbus
