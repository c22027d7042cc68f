#pragma once

#include <Eigen/Dense>
#include <optional>

#include "elsem/estimating.hpp"

namespace elsem {

enum class DualStatus { converged, hull_violation, max_iter, line_search_failure };

const char* to_string(DualStatus s);

/// Solution of the inner weight maximization for one constraint matrix.
/// weights(i) = (1/n) / (1 + lambda . G_i) with n the number of rows; log_el
/// is the attained sum of log-weights.
struct DualSolution {
    Eigen::VectorXd lambda;
    Eigen::VectorXd weights;
    double log_el = 0.0;
    DualStatus status = DualStatus::max_iter;
    int iterations = 0;

    bool converged() const { return status == DualStatus::converged; }
};

struct InnerOptions {
    double tol = 1e-8;    // infinity-norm of the dual gradient
    int max_iter = 100;   // Newton iterations
    bool warn_underdetermined = false;  // stderr note when rows < columns
    std::optional<Eigen::VectorXd> warm_lambda;
};

/// Maximizes sum_i log p_i over probability vectors p with sum_i p_i G_i = 0,
/// through the convex dual in lambda. Newton steps use the exact dual Hessian
/// with a small ridge when ill-conditioned; backtracking keeps every
/// denominator 1 + lambda . G_i >= 1/n and the dual objective non-increasing.
/// Reports hull_violation when no finite maximizer exists (the origin is
/// outside the convex hull of the rows of G).
DualSolution solve_dual(const Eigen::MatrixXd& G, const InnerOptions& options = {});

/// Profile log-EL at B: estfun_profile followed by solve_dual.
DualSolution log_el_profile(const Dataset& data, const MixedGraph& g, const Eigen::MatrixXd& B,
                            const InnerOptions& options = {});

/// Default pseudo-observation weight log(n)/2.
double default_a_n(int n);

/// Appends the row -a_n * (column means of G); the augmented rows always admit
/// a feasible weight vector, so the dual solve cannot hit a hull violation.
Eigen::MatrixXd ael_augment(const Eigen::MatrixXd& G, double a_n);

/// Gradient of the profile log-EL over the free entries of B (order given by
/// ThetaLayout::b_coords), assembled from the converged dual solution at B.
/// Throws std::invalid_argument when the dual does not match the data size.
Eigen::VectorXd grad_log_el(const Dataset& data, const MixedGraph& g, const Eigen::MatrixXd& B,
                            const DualSolution& dual);

/// Same for the pseudo-observation-augmented objective: the dual must come
/// from the augmented matrix (n + 1 weights).
Eigen::VectorXd grad_log_ael(const Dataset& data, const MixedGraph& g, const Eigen::MatrixXd& B,
                             const DualSolution& dual, double a_n);

}  // namespace elsem
