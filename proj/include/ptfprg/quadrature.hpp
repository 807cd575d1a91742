#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ptfprg/hermite.hpp"

namespace ptfprg {

/// One atom of a discrete univariate law.
struct Node {
    double value;
    double weight;
};

inline constexpr int kMaxQuadratureNodes = 32;

/// M-point Gauss-Hermite rule for the standard normal density, weights summing to 1.
///
/// Nodes are the eigenvalues of the Jacobi matrix with off-diagonal sqrt(1..M-1),
/// polished by Newton steps on h_M; weights are 1 / (M h_{M-1}(x)^2). The rule
/// integrates polynomials of degree <= 2M-1 exactly. Sorted ascending and
/// mirrored so the law is exactly symmetric.
inline std::vector<Node> gauss_hermite_nodes(int M)
{
    if (M < 1 || M > kMaxQuadratureNodes) {
        throw std::out_of_range("node count " + std::to_string(M) + " outside [1, "
                                + std::to_string(kMaxQuadratureNodes) + "]");
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(M);
    Eigen::VectorXd sub(std::max(M - 1, 0));
    for (int i = 0; i + 1 < M; ++i) {
        sub[i] = std::sqrt(static_cast<double>(i + 1));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Gauss-Hermite eigen-solve failed");
    }
    std::vector<double> x(solver.eigenvalues().data(), solver.eigenvalues().data() + M);
    std::sort(x.begin(), x.end());

    // h_M'(t) = sqrt(M) h_{M-1}(t)
    std::vector<double> h(static_cast<std::size_t>(M) + 1);
    const double sqrt_m = std::sqrt(static_cast<double>(M));
    for (double &t : x) {
        for (int it = 0; it < 4; ++it) {
            hermite_table(t, h);
            const double deriv = sqrt_m * h[static_cast<std::size_t>(M) - 1];
            if (deriv == 0.0) {
                break;
            }
            t -= h[static_cast<std::size_t>(M)] / deriv;
        }
    }

    std::vector<Node> nodes(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        hermite_table(x[static_cast<std::size_t>(i)], h);
        const double hm1 = h[static_cast<std::size_t>(M) - 1];
        nodes[static_cast<std::size_t>(i)] = {x[static_cast<std::size_t>(i)], 1.0 / (M * hm1 * hm1)};
    }
    // Exact symmetry about zero.
    for (int i = 0, j = M - 1; i <= j; ++i, --j) {
        auto &a = nodes[static_cast<std::size_t>(i)];
        auto &b = nodes[static_cast<std::size_t>(j)];
        if (i == j) {
            a.value = 0.0;
            break;
        }
        const double v = 0.5 * (b.value - a.value);
        const double w = 0.5 * (a.weight + b.weight);
        a = {-v, w};
        b = {v, w};
    }
    double total = 0.0;
    for (const auto &nd : nodes) {
        total += nd.weight;
    }
    for (auto &nd : nodes) {
        nd.weight /= total;
    }
    return nodes;
}

/// N(0,1) moment E[t^m]: 0 for odd m, (m-1)!! for even m.
inline double gaussian_moment(int m)
{
    if (m % 2 != 0) {
        return 0.0;
    }
    double v = 1.0;
    for (int j = m - 1; j > 1; j -= 2) {
        v *= j;
    }
    return v;
}

/// sum_i w_i h_m(x_i); equals [m == 0] for a law matching Gaussian moments through m.
inline double discrete_hermite_moment(const std::vector<Node> &law, int m)
{
    double s = 0.0;
    for (const auto &nd : law) {
        s += nd.weight * hermite(m, nd.value);
    }
    return s;
}

/// sum_i w_i x_i^m.
inline double discrete_moment(const std::vector<Node> &law, int m)
{
    double s = 0.0;
    for (const auto &nd : law) {
        s += nd.weight * std::pow(nd.value, m);
    }
    return s;
}

} // namespace ptfprg
