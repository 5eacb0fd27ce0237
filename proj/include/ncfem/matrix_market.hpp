#pragma once

#include <string>

#include <Eigen/Core>

#include "ncfem/assembly.hpp"

namespace ncfem {

/// MatrixMarket coordinate/array text files, for debugging and exchange.
void write_matrix_market(const std::string& path, const SparseMatrix& A);
SparseMatrix read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const Eigen::VectorXd& v);
Eigen::VectorXd read_matrix_market_vector(const std::string& path);

}  // namespace ncfem
