// Copyright 2026 The ellbailey Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ellbailey::cli {

/// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  ///< constraint violation, non-convergence, rel_err above tol
inline constexpr int kExitUsage = 2;   ///< malformed flags or values

/// Parses "a+bi", "a-bi", "bi" or a bare real. Throws std::invalid_argument.
std::complex<double> parse_complex(std::string_view text);

/// Comma-separated list of complex values.
std::vector<std::complex<double>> parse_complex_list(std::string_view text);

/// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ellbailey::cli
