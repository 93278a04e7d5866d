#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evfreq::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitInfeasible = 3,
    kExitDivergence = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
/// Output goes to `--out` (written atomically) or to `out` when absent.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evfreq::cli
