#pragma once

#include <iosfwd>

namespace peacock {

/// Entry point of the `peacock` tool. Returns 0 on success, 1 on input or
/// processing errors, 2 on usage errors. Diagnostics go to `err` as a single
/// line prefixed with the failing stage.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace peacock
