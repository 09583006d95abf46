#pragma once

#include <iosfwd>

namespace vsg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kServiceError = 3,
};

/// Entry point of the `vsg` command. Never throws; failures map to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vsg::cli
