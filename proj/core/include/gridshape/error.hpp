#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridshape {

enum class ErrorKind {
  kIo,
  kFormat,
  kEmptyShape,
  kDegenerateShape,
  kParse,
  kValidation,
  kComparability,
  kDomain,
  kEmptyDatabase,
  kEmptyIndex,
  kCorruptIndex,
  kEvaluation,
  kInvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` identifies the failure
/// class so callers (the CLI in particular) can map it to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gridshape
