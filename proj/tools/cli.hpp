#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liftkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConditionsFailed = 2;
inline constexpr int kExitDegenerateLift = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

inline constexpr unsigned long long kDefaultSeed = 42;

/// Entry point of the `liftkit` tool. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace liftkit::cli
