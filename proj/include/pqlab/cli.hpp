#pragma once

#include <string>
#include <vector>

namespace pqlab {

// Subcommands: verify | profile | phase | minimize | fit.
// Options come from flags and optionally a JSON file via --config; flags
// override file values. Returns 0 on success, 1 when a verification check
// fails or a solve does not converge, 2 on unknown commands or invalid
// configuration. argv excludes the program name.
int run_command(const std::vector<std::string>& argv);

}  // namespace pqlab
