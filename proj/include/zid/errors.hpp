#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zid {

// Stable failure codes shared by all modules. Messages carry the detail
// (offending vertex, line number, cycle path); the code is what callers and
// tests branch on.
enum class errc {
  cycle,
  self_loop,
  unknown_vertex,
  duplicate_edge,
  overlapping_sets,
  missing_regime,
  unbound_variable,
  domain_mismatch,
  invalid_query,
  malformed_witness,
  malformed_fail,
  malformed_expression,
  subset_limit,
  size_limit,
  parse_error,
  flag_error,
  invalid_identifier,
  internal,
};

std::string_view to_string(errc code);

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace zid
