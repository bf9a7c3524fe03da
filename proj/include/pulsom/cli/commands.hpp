#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

namespace pulsom::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kIoError = 3,
  kCorpusError = 4,
  kDivergence = 5,
};

/// Lower-case hex SHA-256 digest, as listed in run-manifest.
std::string sha256_hex(std::string_view bytes);

/// Entry point behind the `pulsom` executable. Returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pulsom::cli
