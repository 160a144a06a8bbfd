#pragma once

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

namespace handsign {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,        // unreadable input, bad endpoint, empty or mismatched DB
  kExitOutput = 3,       // could not write results
  kExitConvergence = 4,  // training did not converge
};

/// Runs the command line (without the program name). `interrupt`, when
/// given, stops `watch` as soon as it becomes true.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* interrupt = nullptr);

}  // namespace handsign
