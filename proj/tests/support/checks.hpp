#pragma once

// Tiny assertion helpers shared by the test binaries.

#include <optional>
#include <utility>

#include "zid/errors.hpp"

namespace support {

// Runs fn and reports the library error code it threw, if any. Lets tests
// assert on stable codes instead of message text.
template <typename Fn>
std::optional<zid::errc> thrown_code(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const zid::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace support
