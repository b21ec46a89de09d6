#pragma once

#include <iosfwd>

namespace ledgersim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "LEDGERSIM_OUT_DIR";

/// Subcommands: run, compare, validate-config. Returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace ledgersim
