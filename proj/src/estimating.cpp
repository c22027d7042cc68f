#include "elsem/estimating.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>

#include "elsem/common.hpp"

namespace elsem {

Dataset center(const Dataset& data) {
    Dataset out;
    out.Y = data.Y.rowwise() - data.Y.colwise().mean();
    out.centered = true;
    return out;
}

bool ib_singular(const Eigen::MatrixXd& B, double tol) {
    const int m = static_cast<int>(B.rows());
    Eigen::MatrixXd ib = Eigen::MatrixXd::Identity(m, m) - B;
    double det = ib.partialPivLu().determinant();
    return std::abs(det) < tol * (1.0 + B.norm());
}

void check_model_params(const MixedGraph& g, const ModelParams& params) {
    const int m = g.num_vertices();
    if (params.B.rows() != m || params.B.cols() != m)
        throw std::invalid_argument("B has wrong dimensions");
    if (params.Omega.rows() != m || params.Omega.cols() != m)
        throw std::invalid_argument("Omega has wrong dimensions");
    for (int v = 0; v < m; ++v)
        for (int u = 0; u < m; ++u) {
            if (params.B(v, u) != 0.0 && !g.has_directed(u, v))
                throw std::invalid_argument("B(" + std::to_string(v) + "," + std::to_string(u) +
                                            ") nonzero without edge " + g.vertex_names()[u] +
                                            " -> " + g.vertex_names()[v]);
            if (u != v && params.Omega(v, u) != 0.0 && !g.has_bidirected(u, v))
                throw std::invalid_argument("Omega(" + std::to_string(v) + "," +
                                            std::to_string(u) + ") nonzero without edge " +
                                            g.vertex_names()[u] + " <-> " + g.vertex_names()[v]);
        }
    if ((params.Omega - params.Omega.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("Omega is not symmetric");
    if (ib_singular(params.B)) throw std::invalid_argument("I - B is singular");
    Eigen::LLT<Eigen::MatrixXd> llt(params.Omega);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("Omega is not positive definite");
}

Eigen::MatrixXd sigma_of(const ModelParams& params) {
    const int m = static_cast<int>(params.B.rows());
    Eigen::MatrixXd ib = Eigen::MatrixXd::Identity(m, m) - params.B;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(ib);
    if (ib_singular(params.B)) throw NumericalError("sigma_of: I - B is singular");
    Eigen::MatrixXd k = lu.solve(Eigen::MatrixXd::Identity(m, m));
    Eigen::MatrixXd sigma = k * params.Omega * k.transpose();
    return 0.5 * (sigma + sigma.transpose());
}

Eigen::MatrixXd residuals(const Dataset& data, const Eigen::MatrixXd& B) {
    if (B.rows() != data.m() || B.cols() != data.m())
        throw std::invalid_argument("residuals: B dimensions do not match data");
    const int m = data.m();
    Eigen::MatrixXd ib = Eigen::MatrixXd::Identity(m, m) - B;
    return data.Y * ib.transpose();
}

Eigen::MatrixXd estfun_profile(const Dataset& data, const MixedGraph& g,
                               const Eigen::MatrixXd& B) {
    const int n = data.n();
    const int m = data.m();
    if (m != g.num_vertices()) throw std::invalid_argument("estfun_profile: dimension mismatch");
    const auto& pairs = g.nonedge_pairs();
    Eigen::MatrixXd R = residuals(data, B);
    Eigen::MatrixXd G(n, m + static_cast<int>(pairs.size()));
    G.leftCols(m) = data.Y;
    for (size_t k = 0; k < pairs.size(); ++k)
        G.col(m + static_cast<int>(k)) = R.col(pairs[k].first).cwiseProduct(R.col(pairs[k].second));
    return G;
}

namespace {

// Pairs (u, v), u <= v, in half-vectorization order: (0,0),(0,1),...,(0,m-1),(1,1),...
std::vector<IndexPair> vech_pairs(int m) {
    std::vector<IndexPair> out;
    out.reserve(m * (m + 1) / 2);
    for (int u = 0; u < m; ++u)
        for (int v = u; v < m; ++v) out.emplace_back(u, v);
    return out;
}

}  // namespace

Eigen::MatrixXd estfun_naive(const Dataset& data, const MixedGraph& g, const ModelParams& params) {
    const int n = data.n();
    const int m = data.m();
    if (m != g.num_vertices()) throw std::invalid_argument("estfun_naive: dimension mismatch");
    Eigen::MatrixXd R = residuals(data, params.B);
    auto pairs = vech_pairs(m);
    Eigen::MatrixXd G(n, m + static_cast<int>(pairs.size()));
    G.leftCols(m) = data.Y;
    for (size_t k = 0; k < pairs.size(); ++k) {
        auto [u, v] = pairs[k];
        G.col(m + static_cast<int>(k)) =
            R.col(u).cwiseProduct(R.col(v)).array() - params.Omega(u, v);
    }
    return G;
}

Eigen::MatrixXd estfun_naive_vech(const Dataset& data, const MixedGraph& g,
                                  const ModelParams& params) {
    const int n = data.n();
    const int m = data.m();
    if (m != g.num_vertices())
        throw std::invalid_argument("estfun_naive_vech: dimension mismatch");
    Eigen::MatrixXd sigma = sigma_of(params);
    auto pairs = vech_pairs(m);
    Eigen::MatrixXd G(n, m + static_cast<int>(pairs.size()));
    G.leftCols(m) = data.Y;
    for (size_t k = 0; k < pairs.size(); ++k) {
        auto [u, v] = pairs[k];
        G.col(m + static_cast<int>(k)) =
            data.Y.col(u).cwiseProduct(data.Y.col(v)).array() - sigma(u, v);
    }
    return G;
}

Eigen::MatrixXd estfun_pinned(const Dataset& data, const MixedGraph& g,
                              const ModelParams& params) {
    const int n = data.n();
    const int m = data.m();
    Eigen::MatrixXd base = estfun_profile(data, g, params.B);
    Eigen::MatrixXd R = residuals(data, params.B);
    const auto& bi = g.bidirected_edges();
    Eigen::MatrixXd G(n, base.cols() + m + static_cast<int>(bi.size()));
    G.leftCols(base.cols()) = base;
    int c = static_cast<int>(base.cols());
    for (int v = 0; v < m; ++v)
        G.col(c++) = R.col(v).cwiseProduct(R.col(v)).array() - params.Omega(v, v);
    for (auto [u, v] : bi)
        G.col(c++) = R.col(u).cwiseProduct(R.col(v)).array() - params.Omega(u, v);
    return G;
}

OmegaRecovery omega_of(const Dataset& data, const MixedGraph& g, const Eigen::MatrixXd& B,
                       const Eigen::VectorXd& p) {
    const int n = data.n();
    const int m = data.m();
    if (p.size() != n) throw std::invalid_argument("omega_of: weight length mismatch");
    if (std::abs(p.sum() - 1.0) > 1e-8 || p.minCoeff() <= 0.0 || p.maxCoeff() > 1.0 + 1e-12)
        throw std::invalid_argument("omega_of: weights are not a probability vector");
    Eigen::MatrixXd R = residuals(data, B);
    Eigen::MatrixXd M = R.transpose() * p.asDiagonal() * R;
    OmegaRecovery out;
    out.Omega = Eigen::MatrixXd::Zero(m, m);
    for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v) {
            if (u == v || g.has_bidirected(u, v))
                out.Omega(u, v) = 0.5 * (M(u, v) + M(v, u));
            else
                out.feasibility = std::max(out.feasibility, std::abs(M(u, v)));
        }
    return out;
}

ThetaLayout::ThetaLayout(const MixedGraph& g) : m_(g.num_vertices()) {
    for (int v = 0; v < m_; ++v)
        for (int u : g.parents(v)) b_coords_.emplace_back(v, u);
    for (int v = 0; v < m_; ++v) omega_coords_.emplace_back(v, v);
    for (auto [u, v] : g.bidirected_edges()) omega_coords_.emplace_back(u, v);
}

Eigen::VectorXd ThetaLayout::pack(const ModelParams& params) const {
    Eigen::VectorXd theta(dim());
    int k = 0;
    for (auto [v, u] : b_coords_) theta(k++) = params.B(v, u);
    for (auto [u, v] : omega_coords_) theta(k++) = params.Omega(u, v);
    return theta;
}

ModelParams ThetaLayout::unpack(const Eigen::VectorXd& theta) const {
    if (theta.size() != dim()) throw std::invalid_argument("theta length mismatch");
    ModelParams params{Eigen::MatrixXd::Zero(m_, m_), Eigen::MatrixXd::Zero(m_, m_)};
    int k = 0;
    for (auto [v, u] : b_coords_) params.B(v, u) = theta(k++);
    for (auto [u, v] : omega_coords_) {
        params.Omega(u, v) = theta(k);
        params.Omega(v, u) = theta(k);
        ++k;
    }
    return params;
}

Eigen::VectorXd ThetaLayout::pack_b(const Eigen::MatrixXd& B) const {
    Eigen::VectorXd beta(b_dim());
    for (size_t k = 0; k < b_coords_.size(); ++k) beta(k) = B(b_coords_[k].first, b_coords_[k].second);
    return beta;
}

Eigen::MatrixXd ThetaLayout::unpack_b(const Eigen::VectorXd& beta) const {
    if (beta.size() != b_dim()) throw std::invalid_argument("beta length mismatch");
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
    for (size_t k = 0; k < b_coords_.size(); ++k) B(b_coords_[k].first, b_coords_[k].second) = beta(k);
    return B;
}

}  // namespace elsem
