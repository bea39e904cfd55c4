#pragma once

#include <iosfwd>

namespace dlf {

/// Runs one `dlf` command line. Returns 0 on success, 1 on usage or config
/// errors, 2 on numerical failures; failures write a JSON object
/// {"error", "message", "exit_code"} to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dlf
