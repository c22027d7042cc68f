#include "elsem/el_inner.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <iostream>

namespace elsem {

const char* to_string(DualStatus s) {
    switch (s) {
        case DualStatus::converged: return "converged";
        case DualStatus::hull_violation: return "hull_violation";
        case DualStatus::max_iter: return "max_iter";
        case DualStatus::line_search_failure: return "line_search_failure";
    }
    return "unknown";
}

namespace {

// Dual objective Q(lambda) = -sum_i log(1 + lambda . G_i), to be minimized.
// s holds the inner products G * lambda.
double dual_objective(const Eigen::VectorXd& s) {
    double q = 0.0;
    for (int i = 0; i < s.size(); ++i) q -= std::log1p(s(i));
    return q;
}

}  // namespace

DualSolution solve_dual(const Eigen::MatrixXd& G, const InnerOptions& options) {
    const int n = static_cast<int>(G.rows());
    const int c = static_cast<int>(G.cols());
    if (n < 1) throw std::invalid_argument("solve_dual: empty constraint matrix");
    if (!G.allFinite()) throw std::invalid_argument("solve_dual: non-finite constraint matrix");
    if (options.warn_underdetermined && n < c)
        std::cerr << "solve_dual: fewer observations (" << n << ") than constraints (" << c
                  << ")\n";

    DualSolution sol;
    sol.lambda = Eigen::VectorXd::Zero(c);
    if (options.warm_lambda && options.warm_lambda->size() == c) {
        Eigen::VectorXd s = G * (*options.warm_lambda);
        // Warm start only if it is strictly inside the admissible region.
        if ((s.array() + 1.0).minCoeff() >= 1.0 / n) sol.lambda = *options.warm_lambda;
    }

    const double min_denom = 1.0 / n;
    Eigen::VectorXd s = G * sol.lambda;
    double q = dual_objective(s);
    Eigen::VectorXd denom, grad, step;
    int stagnation = 0;

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        sol.iterations = iter;
        denom = s.array() + 1.0;
        Eigen::VectorXd inv = denom.cwiseInverse();
        grad = -(G.transpose() * inv);
        const double grad_norm = grad.lpNorm<Eigen::Infinity>();
        const double sum_p = inv.sum() / n;

        if (grad_norm < options.tol) {
            // At a true stationary point sum_p = 1 holds identically; a small
            // gradient with deficient mass means the dual is running off to
            // infinity along a recession direction (origin outside the hull).
            if (std::abs(sum_p - 1.0) < 1e-10) {
                sol.status = DualStatus::converged;
                break;
            }
            if (std::abs(sum_p - 1.0) > 1e-6) {
                sol.status = DualStatus::hull_violation;
                break;
            }
        }

        // Exact dual Hessian sum_i G_i G_i^T / (1 + lambda.G_i)^2.
        Eigen::MatrixXd scaled = inv.asDiagonal() * G;
        Eigen::MatrixXd hess = scaled.transpose() * scaled;
        double ridge = 0.0;
        Eigen::LLT<Eigen::MatrixXd> llt(hess);
        while (llt.info() != Eigen::Success && ridge < 1e6) {
            ridge = (ridge == 0.0) ? 1e-10 * hess.trace() : ridge * 10.0;
            llt.compute(hess + ridge * Eigen::MatrixXd::Identity(c, c));
        }
        if (llt.info() != Eigen::Success) {
            sol.status = DualStatus::line_search_failure;
            break;
        }
        step = llt.solve(-grad);

        // Backtrack: keep all denominators >= 1/n and do not increase Q.
        double t = 1.0;
        bool progressed = false;
        Eigen::VectorXd gstep = G * step;
        for (int ls = 0; ls < 60; ++ls) {
            Eigen::VectorXd s_new = s + t * gstep;
            if ((s_new.array() + 1.0).minCoeff() >= min_denom) {
                double q_new = dual_objective(s_new);
                if (q_new <= q) {
                    sol.lambda += t * step;
                    s = std::move(s_new);
                    progressed = q_new < q;
                    q = q_new;
                    break;
                }
            }
            t *= 0.5;
        }
        if (progressed) {
            stagnation = 0;
        } else if (++stagnation >= 10) {
            const double mean_norm = grad_norm / n;  // ||sum_i p_i G_i||_inf
            sol.status = mean_norm > options.tol ? DualStatus::hull_violation
                                                 : DualStatus::line_search_failure;
            break;
        }
    }

    denom = s.array() + 1.0;
    sol.weights = denom.cwiseInverse() / n;
    // log_el = sum_i log p_i = -n log n - sum_i log(1 + lambda.G_i).
    sol.log_el = -n * std::log(static_cast<double>(n)) + dual_objective(s);

    if (sol.status == DualStatus::max_iter) {
        // Distinguish plain iteration exhaustion from clear divergence.
        double sum_p = sol.weights.sum();
        if (std::abs(sum_p - 1.0) > 1e-4) sol.status = DualStatus::hull_violation;
    }
    return sol;
}

DualSolution log_el_profile(const Dataset& data, const MixedGraph& g, const Eigen::MatrixXd& B,
                            const InnerOptions& options) {
    return solve_dual(estfun_profile(data, g, B), options);
}

double default_a_n(int n) { return std::log(static_cast<double>(n)) / 2.0; }

Eigen::MatrixXd ael_augment(const Eigen::MatrixXd& G, double a_n) {
    if (a_n <= 0.0) throw std::invalid_argument("ael_augment: a_n must be positive");
    Eigen::MatrixXd out(G.rows() + 1, G.cols());
    out.topRows(G.rows()) = G;
    out.row(G.rows()) = -a_n * G.colwise().mean();
    return out;
}

namespace {

// Shared assembly for the B-gradient of an EL-type objective: given effective
// per-observation weights w_i and the multipliers of the pair-product
// constraints, the derivative with respect to beta_vs is
//   sum_i w_i Y_si * sum_{pairs {v,u}} lambda_{vu} g_u(Y_i).
Eigen::VectorXd assemble_b_gradient(const Dataset& data, const MixedGraph& g,
                                    const Eigen::MatrixXd& B, const Eigen::VectorXd& lambda_pairs,
                                    const Eigen::VectorXd& w) {
    const int m = data.m();
    const auto& pairs = g.nonedge_pairs();
    Eigen::MatrixXd R = residuals(data, B);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(data.n(), m);
    for (size_t k = 0; k < pairs.size(); ++k) {
        auto [a, b] = pairs[k];
        T.col(a) += lambda_pairs(k) * R.col(b);
        T.col(b) += lambda_pairs(k) * R.col(a);
    }
    Eigen::MatrixXd grad_b = T.transpose() * w.asDiagonal() * data.Y;  // (v, s) entries
    ThetaLayout layout(g);
    Eigen::VectorXd grad(layout.b_dim());
    const auto& coords = layout.b_coords();
    for (size_t k = 0; k < coords.size(); ++k) grad(k) = grad_b(coords[k].first, coords[k].second);
    return grad;
}

}  // namespace

Eigen::VectorXd grad_log_el(const Dataset& data, const MixedGraph& g, const Eigen::MatrixXd& B,
                            const DualSolution& dual) {
    const int n = data.n();
    const int c = g.dof_counts().profile_constraints;
    if (dual.weights.size() != n || dual.lambda.size() != c)
        throw std::invalid_argument("grad_log_el: dual solution does not match this problem");
    // d l / d beta_vs = -sum_i (n p_i) lambda . dG_i; mean coordinates do not
    // depend on B, so only the pair-product multipliers enter.
    Eigen::VectorXd lambda_pairs = dual.lambda.tail(c - g.num_vertices());
    Eigen::VectorXd w = static_cast<double>(n) * dual.weights;
    return assemble_b_gradient(data, g, B, lambda_pairs, w);
}

Eigen::VectorXd grad_log_ael(const Dataset& data, const MixedGraph& g, const Eigen::MatrixXd& B,
                             const DualSolution& dual, double a_n) {
    const int n = data.n();
    const int c = g.dof_counts().profile_constraints;
    if (dual.weights.size() != n + 1 || dual.lambda.size() != c)
        throw std::invalid_argument("grad_log_ael: dual solution is not an augmented solve");
    // The pseudo-observation contributes through the column means, which
    // folds into effective weights (n+1) [p_i - (a_n/n) p_{n+1}].
    Eigen::VectorXd w =
        (n + 1.0) * (dual.weights.head(n).array() - (a_n / n) * dual.weights(n)).matrix();
    Eigen::VectorXd lambda_pairs = dual.lambda.tail(c - g.num_vertices());
    return assemble_b_gradient(data, g, B, lambda_pairs, w);
}

}  // namespace elsem
