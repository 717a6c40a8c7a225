#pragma once

#include <Eigen/Dense>

#include <optional>

#include "upostab/errors.hpp"

// Dense linear-algebra kernel shared by the other modules. Sizes stay small
// (regression matrices up to ~60 columns, control matrices up to 8x8), so
// everything favours rank-revealing and symmetric-safe decompositions over
// speed.
namespace upostab::numcore {

/// Eigenvalues (and optionally eigenvectors) of a general real matrix.
struct EigenResult {
    Eigen::VectorXcd eigenvalues;
    std::optional<Eigen::MatrixXcd> eigenvectors;  // columns
};

/// Real spectral decomposition of a symmetric matrix, eigenvalues ascending.
struct SymmetricEigenResult {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // orthonormal columns
};

struct LeastSquaresResult {
    Eigen::MatrixXd solution;
    Eigen::Index rank = 0;
    bool rank_deficient = false;  // numerical rank < cols at relative tol 1e-12
};

/// Minimize ||A*X - B||_F for A (m x n, m >= n). Rank deficiency is reported,
/// not thrown: the minimum-norm solution is returned and the caller decides.
LeastSquaresResult solve_least_squares(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                       const Eigen::Ref<const Eigen::MatrixXd>& B);

/// All eigenvalues of a square real matrix (Hessenberg + shifted QR via Eigen).
/// Throws NoConvergence if the iteration stalls.
EigenResult eigenvalues_general(const Eigen::Ref<const Eigen::MatrixXd>& M,
                                bool with_vectors = false);

/// Maximum eigenvalue modulus.
double spectral_radius(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// Spectral decomposition of a (numerically) symmetric matrix. The input is
/// symmetrized before factorization.
SymmetricEigenResult eigh_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& M);

/// Nearest (Frobenius) symmetric matrix whose eigenvalues are all >= floor.
Eigen::MatrixXd project_psd(const Eigen::Ref<const Eigen::MatrixXd>& M, double floor = 0.0);

/// Solve A*X = B for square A. Throws SingularMatrix when the reciprocal
/// condition estimate drops below 1e-12.
Eigen::MatrixXd solve_linear(const Eigen::Ref<const Eigen::MatrixXd>& A,
                             const Eigen::Ref<const Eigen::MatrixXd>& B);

/// Solve P - M^T P M = Q for symmetric Q via the Kronecker-vectorized linear
/// system. Intended for small orders (the stability checks use n <= 8).
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::Ref<const Eigen::MatrixXd>& M,
                                        const Eigen::Ref<const Eigen::MatrixXd>& Q);

/// Smallest eigenvalue of the symmetrized input.
double min_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& M);

}  // namespace upostab::numcore
