#pragma once

#include <iosfwd>
#include <string>

#include "pbmc/counter.hpp"

namespace pbmc {

enum ExitCode : int {
  kExitOk = 0,
  kExitFail = 1,  // usage error, or verify disagreement
  kExitParse = 2,
  kExitRefused = 3,
  kExitTimeout = 10,
  kExitMemout = 20,
};

/// Entry point of the pbmc tool. `out` gets results, `err` diagnostics.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Counts one instance file and writes `s mc <n>` plus a `c report <json>`
/// line to `out`. Returns the exit code.
int cmdCount(const std::string& path, const CounterConfig& config, bool stats, std::ostream& out, std::ostream& err);

/// Counts under every heuristic / saturation combination and by brute force.
int cmdVerify(const std::string& path, const CounterConfig& base, std::ostream& out, std::ostream& err);

}  // namespace pbmc
