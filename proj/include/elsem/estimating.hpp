#pragma once

#include <Eigen/Dense>

#include "elsem/graph.hpp"

namespace elsem {

/// Coefficient matrix B (entry (v, u) is the effect of u on v, nonzero only for
/// u in parents(v)) and error covariance Omega (off-diagonal support restricted
/// to bidirected pairs, symmetric positive definite).
struct ModelParams {
    Eigen::MatrixXd B;
    Eigen::MatrixXd Omega;
};

/// Observations in rows, one column per graph vertex in declaration order.
struct Dataset {
    Eigen::MatrixXd Y;
    bool centered = false;

    int n() const { return static_cast<int>(Y.rows()); }
    int m() const { return static_cast<int>(Y.cols()); }
};

/// Subtracts the column means; returns a dataset flagged as centered.
Dataset center(const Dataset& data);

/// Scale-aware singularity guard on I - B.
bool ib_singular(const Eigen::MatrixXd& B, double tol = 1e-12);

/// Validates support patterns, det(I - B) != 0 and positive definiteness.
/// Throws std::invalid_argument with a description of the first violation.
void check_model_params(const MixedGraph& g, const ModelParams& params);

/// Implied observation covariance (I-B)^{-1} Omega (I-B)^{-T}, symmetrized.
/// Throws NumericalError when I - B is singular.
Eigen::MatrixXd sigma_of(const ModelParams& params);

/// Residual matrix R = Y (I-B)^T; entry (i, v) is observation i's residual at
/// vertex v after removing parent contributions.
Eigen::MatrixXd residuals(const Dataset& data, const Eigen::MatrixXd& B);

/// Profiled estimating functions, one row per observation: the m observed
/// values (mean constraints) followed by the residual product for each
/// non-bidirected pair {u, v}, u < v, in lexicographic order.
Eigen::MatrixXd estfun_profile(const Dataset& data, const MixedGraph& g,
                               const Eigen::MatrixXd& B);

/// Direct estimating functions in residual-product form: the m observed values
/// followed by g_v g_u - omega_vu for all pairs v <= u in half-vectorization
/// order (columns of the lower triangle).
Eigen::MatrixXd estfun_naive(const Dataset& data, const MixedGraph& g, const ModelParams& params);

/// Direct estimating functions in moment form: Y_i followed by
/// vech(Y_i Y_i^T) - vech(Sigma(B, Omega)), same pair order as estfun_naive.
Eigen::MatrixXd estfun_naive_vech(const Dataset& data, const MixedGraph& g,
                                  const ModelParams& params);

/// Profiled constraints at a fixed (B0, Omega0): estfun_profile columns plus
/// one pinning column g_v g_u - omega0_vu for each support entry (diagonal
/// first, then bidirected pairs). Column count equals dof_counts().q.
Eigen::MatrixXd estfun_pinned(const Dataset& data, const MixedGraph& g, const ModelParams& params);

struct OmegaRecovery {
    Eigen::MatrixXd Omega;
    /// Largest |entry| of the weighted residual second moment over positions
    /// that the graph constrains to zero. Near zero when the weights solve the
    /// profiled problem at B.
    double feasibility = 0.0;
};

/// Recovers Omega from the weighted residual second moment
/// M = (I-B) Y^T diag(p) Y (I-B)^T, keeping entries on the support (diagonal
/// and bidirected pairs) and zeroing the rest. Throws std::invalid_argument if
/// p is not a probability vector over the observations.
OmegaRecovery omega_of(const Dataset& data, const MixedGraph& g, const Eigen::MatrixXd& B,
                       const Eigen::VectorXd& p);

/// Canonical packing of the free parameters: B entries by (row v, column u) in
/// row-major order over directed edges, then diagonal omegas, then bidirected
/// omegas in lexicographic pair order. Total length is dof_counts().d.
class ThetaLayout {
public:
    explicit ThetaLayout(const MixedGraph& g);

    int dim() const { return static_cast<int>(b_coords_.size() + omega_coords_.size()); }
    int b_dim() const { return static_cast<int>(b_coords_.size()); }
    int omega_dim() const { return static_cast<int>(omega_coords_.size()); }
    const std::vector<IndexPair>& b_coords() const { return b_coords_; }      // (v, u)
    const std::vector<IndexPair>& omega_coords() const { return omega_coords_; }  // (u, v), u <= v

    Eigen::VectorXd pack(const ModelParams& params) const;
    ModelParams unpack(const Eigen::VectorXd& theta) const;

    Eigen::VectorXd pack_b(const Eigen::MatrixXd& B) const;
    Eigen::MatrixXd unpack_b(const Eigen::VectorXd& beta) const;

private:
    int m_;
    std::vector<IndexPair> b_coords_;
    std::vector<IndexPair> omega_coords_;
};

}  // namespace elsem
