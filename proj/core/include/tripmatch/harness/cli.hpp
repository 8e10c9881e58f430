#pragma once

#include <iosfwd>

namespace tripmatch::harness {

// Subcommands: gen, solve-fluid, price, simulate, sweep, ingest. Returns the
// process exit status; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace tripmatch::harness
