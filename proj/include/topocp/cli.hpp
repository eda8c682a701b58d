#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace topocp {

enum ExitCode : int { kExitOk = 0, kExitDataError = 1, kExitUsage = 2 };

/// Entry point of the `topocp` tool; `args` excludes the program name.
/// Data errors print `ERROR <Code>: <detail>` on err and return 1; usage
/// errors return 2.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace topocp
