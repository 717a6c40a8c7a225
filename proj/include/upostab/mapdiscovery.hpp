#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

#include "upostab/dynamics.hpp"

namespace upostab::mapdiscovery {

/// Ordered monomial basis over (x_1..x_d, mu~_1..mu~_p) up to a total degree,
/// with the parameter centered at `center`. Term order is graded
/// lexicographic, so the layout is deterministic for given (d, p, degree).
struct CandidateLibrary {
    int state_dim = 0;
    int param_dim = 0;
    int max_degree = 0;
    Eigen::VectorXd center;                // size param_dim
    std::vector<std::vector<int>> terms;   // exponent multi-indices, length d+p

    static CandidateLibrary monomials(int state_dim, int param_dim, int max_degree,
                                      const Eigen::VectorXd& center);

    int term_count() const { return static_cast<int>(terms.size()); }
    int var_count() const { return state_dim + param_dim; }

    /// One library row evaluated at (x, mu - center) packed as a d+p vector.
    Eigen::RowVectorXd evaluate(const Eigen::VectorXd& vars) const;
    /// Library row plus its partial derivatives with respect to every variable.
    void evaluate_with_partials(const Eigen::VectorXd& vars, Eigen::RowVectorXd& theta,
                                Eigen::MatrixXd& partials) const;  // partials: (d+p) x q
};

/// Stacked consecutive-pair data. Row i of X2 is the state successor of the
/// state part of row i of X1; parameter columns of X1 are stored centered.
struct DataMatrices {
    Eigen::MatrixXd X1;  // (pairs) x (d+p)
    Eigen::MatrixXd X2;  // (pairs) x d
};

DataMatrices build_matrices(const dynamics::SectionDataset& data, const Eigen::VectorXd& center);

/// Library matrix: column k holds monomial k evaluated on every row.
Eigen::MatrixXd evaluate_library(const CandidateLibrary& library,
                                 const Eigen::Ref<const Eigen::MatrixXd>& rows);

struct StlsqOptions {
    double lambda = 0.01;
    int max_iters = 20;
    bool column_scaling = false;  // threshold in unit-column-norm space instead
};

struct StlsqResult {
    Eigen::MatrixXd coefficients;     // q x n_targets
    Eigen::VectorXd residuals;        // per target column, RMS
    Eigen::VectorXi active_counts;    // per target column
    bool converged = true;            // false => support still changing at max_iters
    bool rank_deficient = false;      // some restricted solve hit rank deficiency
};

/// Sequential thresholded least squares, run independently per target column.
/// Starts from the full least-squares solution, zeroes coefficients with
/// |xi| <= lambda and re-solves on the surviving support until it is stable.
StlsqResult stlsq(const Eigen::Ref<const Eigen::MatrixXd>& theta,
                  const Eigen::Ref<const Eigen::MatrixXd>& targets, const StlsqOptions& options);

/// A sparse polynomial section map with analytic Jacobians.
struct DiscoveredMap {
    CandidateLibrary library;
    Eigen::MatrixXd coefficients;  // q x d
    double lambda = 0.0;
    Eigen::VectorXd residuals;
    Eigen::VectorXi active_counts;
    bool converged = true;

    int state_dim() const { return library.state_dim; }
    int param_dim() const { return library.param_dim; }

    Eigen::VectorXd eval(const Eigen::VectorXd& x, const Eigen::VectorXd& mu) const;
    /// (A, B) = (dF/dx, dF/dmu) at (x, mu).
    std::pair<Eigen::MatrixXd, Eigen::MatrixXd> jacobians(const Eigen::VectorXd& x,
                                                          const Eigen::VectorXd& mu) const;

    /// Plain-text model file; decimal representation round-trips exactly.
    std::string to_model_file() const;
    static DiscoveredMap from_model_file(const std::string& text);
};

DiscoveredMap discover(const dynamics::SectionDataset& data, const Eigen::VectorXd& center,
                       int degree, double lambda, const StlsqOptions& options = {});

}  // namespace upostab::mapdiscovery
