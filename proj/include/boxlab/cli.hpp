#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace boxlab {

// Runs one CLI invocation (args exclude the program name). Reports go to
// `out` or to --out files written atomically (write then rename). Exit
// codes: 0 success, 1 validation or parse error, 2 gradient-check
// tolerance failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace boxlab
