#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace modyn {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Probability vector p solving Gᵀp = 0, sum(p) = 1, for a generator G with
// zero row sums. Dense LU with the normalization row substituted up to
// `dense_threshold` states, sparse least squares on the augmented system
// above that. Verifies the balance residual against `residual_tol` (infinity
// norm) and throws SingularSystem when the solve fails or leaves a residual
// above it. Small negative entries within the tolerance are clamped to zero.
[[nodiscard]] Eigen::VectorXd stationary_distribution(const SparseRowMatrix& generator,
                                                      double residual_tol,
                                                      Eigen::Index dense_threshold = 4096);

// Dense variant of the same solve for a single generator matrix.
[[nodiscard]] Eigen::VectorXd stationary_from_dense_generator(const Eigen::MatrixXd& generator,
                                                              double residual_tol);

// Least-squares fixed point of A x + b = 0 subject to unit sums over
// consecutive blocks of `block_size` entries. Solves the stacked system
// [A; blockwise-ones] x = [-b; 1] and checks the combined residual (infinity
// norm) against `residual_tol`; throws SingularSystem past it.
[[nodiscard]] Eigen::VectorXd affine_stationary(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b, int block_size,
                                                double residual_tol);

}  // namespace modyn
