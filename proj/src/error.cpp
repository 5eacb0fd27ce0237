#include "ncfem/error.hpp"

namespace ncfem {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::UnsupportedDegree: return "unsupported-degree";
    case ErrorCode::InvalidManufacturedSolution: return "invalid-manufactured-solution";
    case ErrorCode::MissingExactSolution: return "missing-exact-solution";
    case ErrorCode::SingularSystem: return "singular-system";
    case ErrorCode::RankDeficient: return "rank-deficiency";
    case ErrorCode::IndefiniteGram: return "indefinite-gram";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::ConfigError: return "config-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace ncfem
