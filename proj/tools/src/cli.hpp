#pragma once

#include <ostream>

namespace sng::cli {

// Process exit statuses. Each error class gets its own code so scripts can
// tell a bad flag from a bad file.
enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,  // verify: at least one criterion failed
  kUsage = 2,        // unknown flag, missing or malformed argument
  kIo = 3,           // file missing or unwritable
  kFormat = 4,       // file present but not parseable
  kInvariant = 5,    // loaded or built structure failed a check
  kBadInput = 6,     // argument outside an operation's domain
  kInternal = 70,
};

// Environment variable naming the default data directory. Relative paths
// given on the command line are resolved against it when it is set.
inline constexpr const char* kDataDirEnv = "SNG_DATA_DIR";

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace sng::cli
