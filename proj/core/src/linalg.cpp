#include "modyn/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseQR>
#include <cmath>
#include <sstream>
#include <vector>

#include "modyn/errors.hpp"

namespace modyn {
namespace {

// Shared cleanup: verify, clamp solver noise, renormalize.
Eigen::VectorXd finish_distribution(Eigen::VectorXd p, double balance_residual,
                                    double residual_tol) {
  if (!p.allFinite()) {
    throw SingularSystem("stationary solve produced non-finite entries");
  }
  if (balance_residual > residual_tol) {
    std::ostringstream os;
    os << "stationary balance residual " << balance_residual << " exceeds tolerance "
       << residual_tol;
    throw SingularSystem(os.str());
  }
  const double negative_floor = -1e3 * residual_tol;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) {
      if (p[i] < negative_floor) {
        std::ostringstream os;
        os << "stationary solve produced entry " << p[i] << " at index " << i;
        throw SingularSystem(os.str());
      }
      p[i] = 0.0;
    }
  }
  const double total = p.sum();
  if (!(total > 0.0)) {
    throw SingularSystem("stationary solve produced a zero vector");
  }
  return p / total;
}

}  // namespace

Eigen::VectorXd stationary_from_dense_generator(const Eigen::MatrixXd& generator,
                                                double residual_tol) {
  const Eigen::Index n = generator.rows();
  if (n == 0 || generator.cols() != n) {
    throw DimensionMismatch("stationary solve needs a square generator");
  }
  // Replace one balance equation (they are linearly dependent) with the
  // normalization row.
  Eigen::MatrixXd a = generator.transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[n - 1] = 1.0;

  Eigen::VectorXd p = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(rhs);
  const double residual = (generator.transpose() * p).cwiseAbs().maxCoeff();
  return finish_distribution(std::move(p), residual, residual_tol);
}

Eigen::VectorXd stationary_distribution(const SparseRowMatrix& generator, double residual_tol,
                                        Eigen::Index dense_threshold) {
  const Eigen::Index n = generator.rows();
  if (n == 0 || generator.cols() != n) {
    throw DimensionMismatch("stationary solve needs a square generator");
  }

  if (n <= dense_threshold) {
    return stationary_from_dense_generator(Eigen::MatrixXd(generator), residual_tol);
  }

  // Augmented least squares: all n balance rows plus the normalization row,
  // solved with sparse QR.
  Eigen::SparseMatrix<double> transposed = generator.transpose();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(transposed.nonZeros()) +
                   static_cast<std::size_t>(n));
  for (Eigen::Index outer = 0; outer < transposed.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(transposed, outer); it; ++it) {
      triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                            it.value());
    }
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    triplets.emplace_back(static_cast<int>(n), static_cast<int>(c), 1.0);
  }
  Eigen::SparseMatrix<double> augmented(n + 1, n);
  augmented.setFromTriplets(triplets.begin(), triplets.end());
  augmented.makeCompressed();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;

  Eigen::SparseQR<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> qr;
  qr.compute(augmented);
  if (qr.info() != Eigen::Success) {
    throw SingularSystem("sparse QR factorization of the stationary system failed");
  }
  Eigen::VectorXd p = qr.solve(rhs);
  const double residual = (transposed * p).cwiseAbs().maxCoeff();
  return finish_distribution(std::move(p), residual, residual_tol);
}

Eigen::VectorXd affine_stationary(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                  int block_size, double residual_tol) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n) {
    throw DimensionMismatch("affine fixed point needs a square system with matching drive");
  }
  if (block_size <= 0 || n % block_size != 0) {
    throw DimensionMismatch("dimension is not a multiple of the block size");
  }
  const Eigen::Index blocks = n / block_size;

  Eigen::MatrixXd augmented = Eigen::MatrixXd::Zero(n + blocks, n);
  augmented.topRows(n) = A;
  for (Eigen::Index blk = 0; blk < blocks; ++blk) {
    augmented.row(n + blk).segment(blk * block_size, block_size).setOnes();
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + blocks);
  rhs.head(n) = -b;
  rhs.tail(blocks).setOnes();

  Eigen::VectorXd x = augmented.colPivHouseholderQr().solve(rhs);
  const double residual = (augmented * x - rhs).cwiseAbs().maxCoeff();
  if (!x.allFinite() || residual > residual_tol) {
    std::ostringstream os;
    os << "affine fixed-point residual " << residual << " exceeds tolerance " << residual_tol;
    throw SingularSystem(os.str());
  }
  return x;
}

}  // namespace modyn
