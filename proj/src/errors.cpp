#include "zid/errors.hpp"

namespace zid {

std::string_view to_string(errc code) {
  switch (code) {
    case errc::cycle: return "CYCLE";
    case errc::self_loop: return "SELF_LOOP";
    case errc::unknown_vertex: return "UNKNOWN_VERTEX";
    case errc::duplicate_edge: return "DUPLICATE_EDGE";
    case errc::overlapping_sets: return "OVERLAPPING_SETS";
    case errc::missing_regime: return "MISSING_REGIME";
    case errc::unbound_variable: return "UNBOUND_VARIABLE";
    case errc::domain_mismatch: return "DOMAIN_MISMATCH";
    case errc::invalid_query: return "INVALID_QUERY";
    case errc::malformed_witness: return "MALFORMED_WITNESS";
    case errc::malformed_fail: return "MALFORMED_FAIL";
    case errc::malformed_expression: return "MALFORMED_EXPRESSION";
    case errc::subset_limit: return "SUBSET_LIMIT";
    case errc::size_limit: return "SIZE_LIMIT";
    case errc::parse_error: return "PARSE_ERROR";
    case errc::flag_error: return "FLAG_ERROR";
    case errc::invalid_identifier: return "INVALID_IDENTIFIER";
    case errc::internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

}  // namespace zid
