#ifndef OBSFRAME_ERROR_HPP
#define OBSFRAME_ERROR_HPP

#include <stdexcept>
#include <string>

namespace obsframe {

/// Base exception for every failure raised by the library. `code()` is a
/// short stable identifier (e.g. "non_finite", "behind_camera") that callers
/// and tests can match on; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  [[nodiscard]] const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace obsframe

#endif  // OBSFRAME_ERROR_HPP
