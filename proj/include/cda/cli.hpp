#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cda {

/// Entry point of the `cda` tool. args excludes the program name.
/// Exit status: 0 success, 1 validation/usage error, 2 numerical failure.
/// Errors go to `err` as "CDA-E<code>: <message>".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cda
