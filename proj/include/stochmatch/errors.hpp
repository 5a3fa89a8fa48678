#pragma once

#include <stdexcept>
#include <string>

namespace stochmatch {

// An exact oracle or enumerator refused an instance that exceeds its size
// limit. The message states the limit.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stochmatch
