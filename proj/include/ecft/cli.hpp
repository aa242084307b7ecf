#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ecft::cli {

/// Exit statuses. A statistical "reject" is output data, never an error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/**
 * Parses a sample-size list such as "15,30,100" or "50,100,...,2000"; an
 * ellipsis continues the arithmetic progression set by the two preceding
 * values up to the value after it. Throws ParseError.
 */
[[nodiscard]] std::vector<std::size_t> parse_size_list(std::string_view text);

/// Newline-delimited decimals; blank lines and lines starting with '#' are
/// skipped. Throws ParseError naming the 1-based line number.
[[nodiscard]] std::vector<double> parse_observations(std::istream& in);

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecft::cli
