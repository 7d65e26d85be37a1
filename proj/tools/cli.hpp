#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace odcheck::cli {

enum ExitCode : int {
	ExitSecure = 0,
	ExitInsecure = 1,
	ExitError = 2,
	ExitUpToBound = 3,
};

/// Entry point shared by main() and the tests. args[0] is the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace odcheck::cli
