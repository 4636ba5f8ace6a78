#pragma once

// The `specminer` command line. Exit codes: 0 success, 1 usage, 2 input
// error, 3 analysis error.

#include <ostream>
#include <string>
#include <vector>

namespace specminer::cli {

/// `args` excludes the program name. Data goes to `out`, logs to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace specminer::cli
