#pragma once

namespace fdglm::cli {

/// Full command-line driver; returns the process exit code
/// (0 success, 1 input/parse error, 2 fit nonconvergence).
int run(int argc, const char* const* argv);

}  // namespace fdglm::cli
