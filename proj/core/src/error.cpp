#include "gridshape/error.hpp"

namespace gridshape {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "io error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kEmptyShape: return "empty shape";
    case ErrorKind::kDegenerateShape: return "degenerate shape";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kComparability: return "comparability error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kEmptyDatabase: return "empty database";
    case ErrorKind::kEmptyIndex: return "empty index";
    case ErrorKind::kCorruptIndex: return "corrupt index";
    case ErrorKind::kEvaluation: return "evaluation error";
    case ErrorKind::kInvalidArgument: return "invalid argument";
  }
  return "error";
}

}  // namespace gridshape
