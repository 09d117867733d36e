#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace samp::cli {

enum ExitCode : int {
    kOk = 0,
    kProgramError = 1,  // syntax or runtime error in the Samp program
    kUsage = 2,         // bad arguments, missing files
    kStale = 3,         // trace invalidated by edit
    kPortBusy = 4,
};

/// Entry point shared by the `samp` binary and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace samp::cli
