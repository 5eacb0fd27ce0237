#include "ncfem/matrix_market.hpp"

#include <unsupported/Eigen/SparseExtra>

#include "ncfem/error.hpp"

namespace ncfem {

void write_matrix_market(const std::string& path, const SparseMatrix& A) {
  Eigen::SparseMatrix<double> Ac(A);
  if (!Eigen::saveMarket(Ac, path)) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
}

SparseMatrix read_matrix_market(const std::string& path) {
  Eigen::SparseMatrix<double> A;
  if (!Eigen::loadMarket(A, path)) throw Error(ErrorCode::ParseError, "cannot read matrix from " + path);
  return SparseMatrix(A);
}

void write_matrix_market(const std::string& path, const Eigen::VectorXd& v) {
  if (!Eigen::saveMarketVector(v, path)) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
}

Eigen::VectorXd read_matrix_market_vector(const std::string& path) {
  Eigen::VectorXd v;
  if (!Eigen::loadMarketVector(v, path)) throw Error(ErrorCode::ParseError, "cannot read vector from " + path);
  return v;
}

}  // namespace ncfem
