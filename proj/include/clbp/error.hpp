#pragma once

#include <stdexcept>
#include <string>

namespace clbp {

enum class ErrorCode {
  WrongColorspace,
  EmptyInput,
  BadDimensions,
  SizeMismatch,
  DegenerateInput,
  NoSkinRegion,
  BadArgument,
  FormatError,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clbp
