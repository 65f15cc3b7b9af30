#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace skewlim {

// runs one command; 0 = pass, 1 = failed checks or operational error,
// 2 = usage or input parse error (diagnostics on err)
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// subcommand -> operations it drives; the unit suite checks every public
// operation appears at least once
const std::vector<std::pair<std::string, std::vector<std::string>>>& cli_dispatch_table();

}  // namespace skewlim
