#ifndef RW_CLI_HPP
#define RW_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace rw {

// Runs one CLI invocation; output goes to `out`, diagnostics to `err`.
// Exit codes: 0 success, 1 user error, 2 solver or capacity failure.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rw

#endif
