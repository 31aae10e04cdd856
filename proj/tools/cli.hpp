#pragma once

#include <iosfwd>

namespace topoinfer {

/// Entry point of the `topoinfer` tool. Returns 0 on success or a passing verdict, 1 on a
/// failing verdict or failed validation, 2 on usage and configuration errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace topoinfer
