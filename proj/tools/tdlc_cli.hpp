#pragma once

#include <iosfwd>

namespace tdlc::cli {

// Runs one tdlc command line; reports go to `out`, diagnostics to `err`.
// Returns the process exit code: 0 on success, 1 on a domain error
// (inconsistent constraints, enumeration cap, size limit, ...), 2 on a
// usage or parse error.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace tdlc::cli
