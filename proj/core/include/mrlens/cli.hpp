#ifndef MRLENS_CLI_HPP
#define MRLENS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mrlens {

/// Runs the mrl command line (match / check / get / put / compile / oracle)
/// against the given streams. Returns the process exit status:
///   0  success / input accepted
///   1  input rejected, lens parse failure, or failed type check
///   2  usage, file, syntax, or other errors
/// Diagnostics go to err; data goes to out only.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace mrlens

#endif
