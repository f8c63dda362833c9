#pragma once

#include <stdexcept>
#include <string>

namespace mityuk {

/// Error raised by every stage of the pipeline.
///
/// `code()` is a short machine-readable tag ("point-not-interior",
/// "slit-arity", ...) that the CLI forwards in its error records; `what()`
/// carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace mityuk
