#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ncfem/analysis.hpp"
#include "ncfem/error.hpp"
#include "ncfem/problem.hpp"

namespace ncfem {

/// Rate window over the trailing `pairs` consecutive level pairs.
struct RateCheck {
  std::string quantity;  ///< l2, h1b, energy or cons
  double lo = 0.0;
  double hi = 0.0;
  int pairs = 1;
};

struct StudyChecks {
  std::vector<RateCheck> rates;
  bool strang_dominance = false;
  bool audit = false;
  std::optional<double> max_wall_ms;
};

struct StudyConfig {
  std::string problem = "P1";
  MethodConfig method;
  bool auto_eta = false;  ///< resolve method.eta from the penalty advisory on the coarsest mesh
  int levels = 4;
  int n0 = 8;
  std::uint64_t seed = 1;
  bool strang = true;  ///< compute inf-sup and the error bound per level
  int dense_limit = 800;  ///< inf-sup switches to subspace iteration above this size
  StudyChecks checks;
  std::string output;  ///< directory for report.csv and report.md; empty writes nothing

  void validate() const;  ///< throws ConfigError
};

/// INI with sections [study] and [checks]. Throws ConfigError.
StudyConfig parse_study_config(std::istream& in);
StudyConfig load_study_config(const std::string& path);

struct StudyRow {
  int level = 0;
  double h = 0.0;
  int ndof = 0;
  ErrorSummary errors;
  double strang_error = std::numeric_limits<double>::quiet_NaN();  ///< error in the bound's norm
  double wall_ms = 0.0;
};

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ConvergenceReport {
  StudyConfig config;
  std::vector<StudyRow> rows;
  AuditReport audit;
  StabilityAdvice advice;
  std::vector<CheckOutcome> checks;

  std::vector<std::optional<double>> rates(const std::string& quantity) const;
  bool passed() const;
  void write_csv(std::ostream& out) const;
  void write_markdown(std::ostream& out) const;
};

/// Assemble, solve and analyze each level, then evaluate the configured
/// checks. Writes report.csv and report.md when config.output is set.
ConvergenceReport run_study(const StudyConfig& cfg);

/// One registry entry: name, description, coercivity mode and audit status.
std::string describe_problem(const ProblemSpec& p);
void list_problems(std::ostream& out);
void mesh_info(std::ostream& out, const Mesh& m);

/// Process exit status: 2 for configuration and input errors, 3 for numerical failures.
int exit_code(ErrorCode code);

}  // namespace ncfem
