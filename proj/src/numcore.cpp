#include "upostab/numcore.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace upostab::numcore {

namespace {

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& M, const char* who) {
    if (!M.allFinite()) {
        throw Error(std::string(who) + ": non-finite entries in input");
    }
}

}  // namespace

LeastSquaresResult solve_least_squares(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                       const Eigen::Ref<const Eigen::MatrixXd>& B) {
    require_finite(A, "solve_least_squares");
    require_finite(B, "solve_least_squares");
    if (A.rows() != B.rows()) {
        throw Error("solve_least_squares: row mismatch between A and B");
    }
    // Column-pivoted QR with a completion step: rank-revealing and returns the
    // minimum-norm solution when the numerical rank drops.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(1e-12);
    LeastSquaresResult out;
    out.solution = cod.solve(B);
    out.rank = cod.rank();
    out.rank_deficient = out.rank < A.cols();
    return out;
}

EigenResult eigenvalues_general(const Eigen::Ref<const Eigen::MatrixXd>& M, bool with_vectors) {
    require_finite(M, "eigenvalues_general");
    if (M.rows() != M.cols()) {
        throw Error("eigenvalues_general: matrix must be square");
    }
    EigenResult out;
    if (M.rows() == 0) {
        out.eigenvalues.resize(0);
        return out;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(M, with_vectors);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("eigenvalues_general: QR iteration did not converge");
    }
    out.eigenvalues = solver.eigenvalues();
    if (with_vectors) {
        out.eigenvectors = solver.eigenvectors();
    }
    return out;
}

double spectral_radius(const Eigen::Ref<const Eigen::MatrixXd>& M) {
    return eigenvalues_general(M).eigenvalues.cwiseAbs().maxCoeff();
}

SymmetricEigenResult eigh_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& M) {
    require_finite(M, "eigh_symmetric");
    if (M.rows() != M.cols()) {
        throw Error("eigh_symmetric: matrix must be square");
    }
    Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("eigh_symmetric: iteration did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXd project_psd(const Eigen::Ref<const Eigen::MatrixXd>& M, double floor) {
    SymmetricEigenResult eig = eigh_symmetric(M);
    Eigen::VectorXd clamped = eig.eigenvalues.cwiseMax(floor);
    return eig.eigenvectors * clamped.asDiagonal() * eig.eigenvectors.transpose();
}

Eigen::MatrixXd solve_linear(const Eigen::Ref<const Eigen::MatrixXd>& A,
                             const Eigen::Ref<const Eigen::MatrixXd>& B) {
    require_finite(A, "solve_linear");
    require_finite(B, "solve_linear");
    if (A.rows() != A.cols()) {
        throw Error("solve_linear: matrix must be square");
    }
    if (A.rows() != B.rows()) {
        throw Error("solve_linear: row mismatch between A and B");
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rcond = lu.rcond();
    if (!std::isfinite(rcond) || rcond < 1e-12) {
        std::ostringstream msg;
        msg << "solve_linear: matrix is numerically singular (rcond " << rcond << ")";
        throw SingularMatrix(msg.str());
    }
    return lu.solve(B);
}

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::Ref<const Eigen::MatrixXd>& M,
                                        const Eigen::Ref<const Eigen::MatrixXd>& Q) {
    const Eigen::Index n = M.rows();
    if (M.cols() != n || Q.rows() != n || Q.cols() != n) {
        throw Error("solve_discrete_lyapunov: dimension mismatch");
    }
    // vec(M^T P M) = (M^T kron M^T) vec(P)
    Eigen::MatrixXd kron(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            kron.block(i * n, j * n, n, n) = M.transpose()(i, j) * M.transpose();
        }
    }
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n * n, n * n) - kron;
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(Q.data(), n * n);
    Eigen::VectorXd vec_p = solve_linear(lhs, rhs);
    Eigen::MatrixXd P = Eigen::Map<const Eigen::MatrixXd>(vec_p.data(), n, n);
    return 0.5 * (P + P.transpose());
}

double min_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& M) {
    return eigh_symmetric(M).eigenvalues.minCoeff();
}

}  // namespace upostab::numcore
