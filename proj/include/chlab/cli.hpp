#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command-line front end. run() is the whole program minus process plumbing,
// so tests can drive it in-process: args are argv[1..], machine-readable
// output goes to `out` (or the file named by --out), diagnostics to `err`.
// Exit status: 0 success, 2 validation or usage error, 1 internal error.

namespace chlab::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chlab::cli
