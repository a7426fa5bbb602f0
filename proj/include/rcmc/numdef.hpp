#ifndef RCMC_NUMDEF_HPP
#define RCMC_NUMDEF_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace rcmc {

using Real = double;
using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<Real>;
using Triplet = Eigen::Triplet<Real>;

inline Index nnz(const SparseMatrix &A) { return A.nonZeros(); }

} // namespace rcmc

#endif
