#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idemfactor::cli {

/**
 * Runs one command line (without the program name). Results go to `out` as
 * a single JSON document; diagnostics go to `err`.
 * Exit codes: 0 property established, 1 computed but fails, 2 bad input.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idemfactor::cli
