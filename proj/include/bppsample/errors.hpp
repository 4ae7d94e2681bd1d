#pragma once

#include <stdexcept>
#include <string>

namespace bppsample {

/// Rejected input: bad instance data, malformed files, violated preconditions.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string &what)
      : std::invalid_argument(what) {}
};

} // namespace bppsample
