#pragma once

#include <ostream>

#include "lrfim/campaigns.hpp"

namespace lrfim::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,          // bad flags or parameters
  kInfeasible = 2,     // M below threshold under --require-feasible
  kVerifyFailed = 3,   // an asserted check was violated
  kUnknown = 64        // unknown subcommand or suite
};

/// Exit code for a finished verify run.
inline int verify_exit_code(const Campaign& c) { return c.ok() ? kOk : kVerifyFailed; }

/// Full command line front end; CSV files go to --out (default $LRFIM_OUT, else ".").
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lrfim::cli
