#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "leafcurrent/config.hpp"
#include "leafcurrent/reports.hpp"

namespace leafcurrent {

// Subcommands. Each validates the config, writes its tables and plots into
// rec.dir() and records pass/fail flags; the caller writes the manifest.
// Quadrature failures are recorded as failed flags with the partial values
// still written.

void cmd_leaf(const RunConfig& c, RunRecord& rec);
void cmd_extend(const RunConfig& c, RunRecord& rec);
void cmd_mass(const RunConfig& c, RunRecord& rec);
void cmd_lemmas(const RunConfig& c, RunRecord& rec);
void cmd_ddc(const RunConfig& c, RunRecord& rec);
void cmd_sharpness(const RunConfig& c, RunRecord& rec);

const std::vector<std::string>& command_names();

/// Runs one subcommand and writes its manifest. Returns 0 when every flag
/// passed, 1 otherwise.
int run_command(const std::string& name, const RunConfig& c, std::ostream& log);

/// Entry point of the leafcurrent executable. Exit codes: 0 all flags pass,
/// 1 some flag failed, 2 usage or configuration error, 3 I/O error.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace leafcurrent
