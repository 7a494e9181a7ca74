#pragma once

#include "liqvap/config.hpp"

#include <iosfwd>
#include <vector>

namespace liqvap {

// Command names accepted by run_command, in help order.
const std::vector<std::string>& command_names();

// Runs one command against cfg and writes the CSV artifact to out_path.
// Progress lines go to info unless quiet; error names go to diag. Returns the
// process exit code: 0 success, 2 runtime or validation failure. An aborted
// run leaves a trailing "# INCOMPLETE" line in the output file.
int run_command(const std::string& cmd, const RunConfig& cfg, const std::string& out_path,
                bool quiet, std::ostream& info, std::ostream& diag);

} // namespace liqvap
