#pragma once

#include <stdexcept>
#include <string>

namespace ncfem {

enum class ErrorCode {
  InvalidArgument,
  InvalidConfig,
  UnsupportedDegree,
  InvalidManufacturedSolution,
  MissingExactSolution,
  SingularSystem,
  RankDeficient,
  IndefiniteGram,
  ParseError,
  ConfigError,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-checkable error category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ncfem
