#pragma once

#include <string>
#include <vector>

#include "ncfem/problem.hpp"

namespace ncfem {

/// Names accepted by make_problem, in listing order.
std::vector<std::string> problem_names();

/// Built-in problems on the unit square. `degree` selects the polynomial
/// degree of the exact solution of the P3 family and is ignored otherwise.
/// Boundary data are derived from the exact solution.
ProblemSpec make_problem(const std::string& name, int degree = 2);

}  // namespace ncfem
