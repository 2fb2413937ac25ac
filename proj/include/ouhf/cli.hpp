#pragma once

#include <ostream>

namespace ouhf::cli {

/// Runs one subcommand. Errors are reported on `err` as a single line
/// "error: <kind>: <message>"; returns 0 on success, 1 on runtime errors, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ouhf::cli
