#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "holodyn/core/complex.hpp"
#include "holodyn/core/error.hpp"
#include "holodyn/laurent/series.hpp"
#include "holodyn/operators/operator.hpp"

namespace holodyn {

struct MixingOptions {
    int half_width = 16;       // unknown exponents -W..W
    int max_half_width = 64;
    std::size_t nodes = 128;   // per boundary circle
};

struct MixingAttempt {
    int half_width = 0;
    double res_U = 0.0;
    double res_V = 0.0;
};

struct MixingWitness {
    LaurentSeries h;
    double res_U = 0.0;  // sup |h - f| on K
    double res_V = 0.0;  // sup |T^n h - g| on K
    int half_width = 0;
    bool success = false;
    std::vector<MixingAttempt> attempts;
};

namespace detail {

inline LaurentSeries mixing_solve(const WeightedCompositionOp& T, const LaurentSeries& f, const LaurentSeries& g,
                                  const CompactAnnulus& K, int n, int W, std::size_t nodes, double r_in,
                                  double r_out) {
    const cplx a = T.symbol().normalized().as<Linear>()->a;
    const int cols = 2 * W + 1;
    const std::vector<double> radii = K.inner == K.outer ? std::vector<double>{K.inner}
                                                          : std::vector<double>{K.inner, K.outer};
    const auto rows = static_cast<Eigen::Index>(2 * radii.size() * nodes);
    Eigen::MatrixXcd A(rows, cols);
    Eigen::VectorXcd rhs(rows);
    const cplx an = ipow(a, n);
    Eigen::Index row = 0;
    // h = f on K
    for (double r : radii)
        for (std::size_t i = 0; i < nodes; ++i, ++row) {
            const cplx z = circle_node(r, i, nodes);
            for (int j = -W; j <= W; ++j) A(row, j + W) = ipow(z, j);
            rhs(row) = f.evaluate(z);
        }
    // (T^n h)(z) = P_n(z) h(a^n z) = g on K, P_n(z) = prod_{i<n} omega(a^i z)
    for (double r : radii)
        for (std::size_t i = 0; i < nodes; ++i, ++row) {
            const cplx z = circle_node(r, i, nodes);
            cplx P{1.0};
            cplx w = z;
            for (int k = 0; k < n; ++k, w *= a) P *= T.multiplier_at(w);
            require(std::abs(P) > 0.0 && std::isfinite(std::abs(P)), Reason::Numerical,
                    "weight product vanishes or overflows on K");
            for (int j = -W; j <= W; ++j) A(row, j + W) = P * ipow(an * z, j);
            rhs(row) = g.evaluate(z);
        }
    Eigen::VectorXd scale(cols);
    for (int c = 0; c < cols; ++c) {
        scale(c) = A.col(c).norm();
        require(scale(c) > 0.0 && std::isfinite(scale(c)), Reason::Numerical, "degenerate least-squares column");
        A.col(c) /= scale(c);
    }
    Eigen::VectorXcd x = A.colPivHouseholderQr().solve(rhs);
    std::vector<cplx> c(static_cast<std::size_t>(cols));
    for (int k = 0; k < cols; ++k) c[static_cast<std::size_t>(k)] = x(k) / scale(k);
    return LaurentSeries(-W, std::move(c), r_in, r_out);
}

}  // namespace detail

/// Laurent polynomial h with h close to f on K and T^n h close to g on K, for a linear
/// symbol with psi_n(K) disjoint from K. Doubles the exponent window until both residuals
/// are below eps or the window limit is reached.
inline MixingWitness mixing_witness(const WeightedCompositionOp& T, const LaurentSeries& f, const LaurentSeries& g,
                                    const CompactAnnulus& K, double eps, int n, const MixingOptions& opt = {}) {
    require(n >= 1, Reason::Precondition, "mixing witness needs n >= 1");
    const Symbol psi = T.symbol().normalized();
    const auto* lin = psi.as<Linear>();
    require(lin != nullptr, Reason::Precondition, "mixing witness needs a linear symbol");

    double r_in = 0.0;
    double r_out = kInf;
    if (const auto* d = T.domain().as<PuncturedSimplyConnected>()) {
        require(!d->base && d->puncture == cplx{}, Reason::Precondition,
                "mixing witness supports C* and discs punctured at 0 only");
        r_out = d->radius;
    } else {
        require(T.domain().as<PuncturedPlane>() != nullptr, Reason::Precondition,
                "mixing witness supports C* and discs punctured at 0 only");
    }
    require(r_in < K.inner && K.outer < r_out, Reason::Domain, "K is not inside the domain");

    const double s = std::pow(std::abs(lin->a), n);
    require(s * K.outer < K.inner || s * K.inner > K.outer, Reason::Precondition,
            "psi_n(K) meets K; n is below the separation index");

    for (double r : {K.inner, K.outer})
        for (std::size_t i = 0; i < 256; ++i)
            require(std::abs(T.multiplier_at(circle_node(r, i, 256))) > 1e-300, Reason::Precondition,
                    "multiplier has a sampled zero on K");

    MixingWitness out;
    for (int W = opt.half_width; W <= opt.max_half_width; W *= 2) {
        const LaurentSeries h = detail::mixing_solve(T, f, g, K, n, W, opt.nodes, r_in, r_out);
        MixingAttempt at{W, sup_norm(h - f, K), sup_norm(iterate(T, h, n) - g, K)};
        out.attempts.push_back(at);
        if (out.attempts.size() == 1 || std::max(at.res_U, at.res_V) < std::max(out.res_U, out.res_V)) {
            out.h = h;
            out.res_U = at.res_U;
            out.res_V = at.res_V;
            out.half_width = W;
        }
        if (at.res_U < eps && at.res_V < eps) break;
    }
    out.success = out.res_U < eps && out.res_V < eps;
    return out;
}

}  // namespace holodyn
