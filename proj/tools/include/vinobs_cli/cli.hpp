#pragma once

#include <ostream>

namespace vinobs {

/// Runs the vinobs command line. Returns 0 on success, 1 on invalid input or
/// configuration, 2 on numeric failure.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vinobs
