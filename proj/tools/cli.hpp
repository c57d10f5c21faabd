#ifndef BBLA_CLI_HPP
#define BBLA_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace bbla::cli
{

/// Exit codes of the command-line tool.
enum ExitCode : int
{
    kSuccess = 0,
    kSingular = 1,
    kRetriesExhausted = 2,
    kUsageError = 3
};

/// Version of the JSON report layout.
inline constexpr int kReportSchemaVersion = 1;

///
/// Run one command. `args` excludes the program name. Results go to `out`,
/// diagnostics to `err`; the return value is an ExitCode.
///
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bbla::cli

#endif // BBLA_CLI_HPP
