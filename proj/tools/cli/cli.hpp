#ifndef COPKIT_TOOLS_CLI_HPP_
#define COPKIT_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "copkit/margins.hpp"

namespace copkit::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int
{
    kSuccess = 0,
    kInputError = 1,
    kDomainFinding = 2,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless an --output path is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "uniform:90,110", "exponential:1", "lognormal:0,1", "gumbel-standard",
/// "bernoulli:0.3".
Margin parseMargin(const std::string& text);

}

#endif // COPKIT_TOOLS_CLI_HPP_
