#pragma once

#include <string>
#include <vector>

namespace rqtool {

// Parses and runs one rqtool invocation; args exclude the program name.
// Returns the process exit status: 0 on success, 1 for usage errors, 2 for
// configuration errors, 3 for I/O errors, 4 for numerical failures.
int run(const std::vector<std::string>& args);

int cli_main(int argc, char** argv);

}  // namespace rqtool
