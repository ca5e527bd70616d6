#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vring {

// Parses and dispatches one command line (without the program name).
// Exit codes: 0 success, 1 domain or runtime error, 2 usage error,
// 3 acceptance failure from `verify`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vring
