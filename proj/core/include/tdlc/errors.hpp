#pragma once

#include <stdexcept>
#include <string>

namespace tdlc {

// Every failure mode the library reports deliberately. `parse_error` and
// `invalid_argument` are caller mistakes (malformed input); the rest are
// domain conditions a correct caller can still run into.
enum class errc {
  parse_error,      // malformed text input (ordinal expression, cycles, DSL, JSON)
  invalid_argument, // structurally bad value (non-bijective map, bad matrix, bad flag combo)
  depth_cap,        // ordinal exponent nesting beyond the configured cap
  overflow,         // coefficient arithmetic would exceed the machine-natural range
  not_a_successor,  // predecessor of 0 or of a limit ordinal
  cap_exceeded,     // enumeration larger than the configured cap
  size_limit,       // combinatorial input beyond the supported size
  inconsistent,     // contradictory constraints (empty interval / yes-vs-no membership)
};

inline const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::parse_error: return "parse_error";
    case errc::invalid_argument: return "invalid_argument";
    case errc::depth_cap: return "depth_cap";
    case errc::overflow: return "overflow";
    case errc::not_a_successor: return "not_a_successor";
    case errc::cap_exceeded: return "cap_exceeded";
    case errc::size_limit: return "size_limit";
    case errc::inconsistent: return "inconsistent";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tdlc
