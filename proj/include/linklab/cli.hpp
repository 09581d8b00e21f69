#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linklab {

/// Entry point of the `linklab` tool. Returns 0 on success, 2 on usage errors
/// and 1 on runtime errors.
int run_command(int argc, char** argv);

/// Same, with explicit arguments (without the program name) and output stream.
int run_command(const std::vector<std::string>& args, std::ostream& out);

}  // namespace linklab
