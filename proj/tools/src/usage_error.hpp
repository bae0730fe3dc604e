#pragma once

#include <stdexcept>

namespace sng::cli {

// Flag combination the parser accepts but the command cannot use.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sng::cli
