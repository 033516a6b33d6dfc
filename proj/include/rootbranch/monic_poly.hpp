#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "rootbranch/error.hpp"
#include "rootbranch/expression.hpp"

namespace rootbranch {

/// z^n + a_1 z^{n-1} + ... + a_n; `coeffs` holds a_1..a_n.
struct MonicPoly {
    std::vector<cplx> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()); }

    cplx operator()(cplx z) const {
        cplx acc{1.0, 0.0};
        for (cplx a : coeffs) acc = acc * z + a;
        return acc;
    }

    /// Value and derivative by Horner's scheme.
    std::pair<cplx, cplx> value_and_derivative(cplx z) const {
        cplx p{1.0, 0.0}, dp{0.0, 0.0};
        for (cplx a : coeffs) {
            dp = dp * z + p;
            p = p * z + a;
        }
        return {p, dp};
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (cplx a : coeffs) m = std::max(m, std::abs(a));
        return m;
    }
};

/// s[k] = sum of k-th powers of the zeros, k = 0..n.
struct PowerSums {
    std::vector<cplx> s;

    int count() const { return s.empty() ? 0 : static_cast<int>(std::lround(s[0].real())); }
};

/// Monic coefficients from power sums via Newton's identities:
/// a_k = -(s_k + a_1 s_{k-1} + ... + a_{k-1} s_1) / k.
inline MonicPoly newton_to_coeffs(const PowerSums& ps) {
    const int n = ps.count();
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "power sums describe no zeros");
    if (static_cast<int>(ps.s.size()) < n + 1)
        throw Error(ErrorCode::InvalidArgument, "need power sums s_0..s_n");
    MonicPoly p;
    p.coeffs.resize(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        cplx acc = ps.s[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) acc += p.coeffs[static_cast<std::size_t>(j - 1)] * ps.s[static_cast<std::size_t>(k - j)];
        p.coeffs[static_cast<std::size_t>(k - 1)] = -acc / static_cast<double>(k);
    }
    return p;
}

/// The monic polynomial with the given zeros.
inline MonicPoly from_roots(const std::vector<cplx>& roots) {
    std::vector<cplx> c{cplx{1.0, 0.0}};  // c[0] leading
    for (cplx r : roots) {
        c.push_back(cplx{0.0, 0.0});
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] -= r * c[k - 1];
    }
    return MonicPoly{std::vector<cplx>(c.begin() + 1, c.end())};
}

/// Coefficients of Q(w) = P(center + scale*w) / scale^n.
inline MonicPoly rescale(const MonicPoly& p, cplx center, double scale) {
    const std::size_t n = p.coeffs.size();
    // full coefficient list, highest degree first
    std::vector<cplx> c(n + 1);
    c[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) c[k + 1] = p.coeffs[k];
    // Taylor shift by repeated synthetic division
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 1; k <= n - i; ++k) c[k] += center * c[k - 1];
    MonicPoly q;
    q.coeffs.resize(n);
    double sk = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        sk *= scale;
        q.coeffs[k - 1] = c[k] / sk;
    }
    return q;
}

/// Inverse of rescale: P(z) = scale^n * Q((z - center)/scale).
inline MonicPoly unscale(const MonicPoly& q, cplx center, double scale) {
    const std::size_t n = q.coeffs.size();
    MonicPoly p;
    p.coeffs.resize(n);
    double sk = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        sk *= scale;
        p.coeffs[k] = q.coeffs[k] * sk;
    }
    return rescale(p, -center, 1.0);
}

/// Sort key making root lists deterministic.
inline bool lex_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

/// All n roots of a monic polynomial by Aberth–Ehrlich simultaneous iteration.
/// Each returned root satisfies |P(root)| <= tol * (1 + max|a_k|)^n; roots are
/// sorted by (re, im).
inline std::vector<cplx> poly_roots(const MonicPoly& p, double tol = 1e-12) {
    const int n = p.degree();
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "poly_roots needs degree >= 1");
    if (n == 1) return {-p.coeffs[0]};

    constexpr int max_iterations = 500;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    // Fujiwara bound on the root moduli
    double bound = 0.0;
    for (int k = 1; k <= n; ++k) {
        double a = std::abs(p.coeffs[static_cast<std::size_t>(k - 1)]);
        if (k == n) a /= 2.0;
        bound = std::max(bound, std::pow(a, 1.0 / k));
    }
    bound = 2.0 * bound;
    if (bound == 0.0) return std::vector<cplx>(static_cast<std::size_t>(n), cplx{0.0, 0.0});

    const cplx centroid = -p.coeffs[0] / static_cast<double>(n);
    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        z[static_cast<std::size_t>(j)] =
            centroid + std::polar(0.5 * bound, 2.0 * std::numbers::pi * j / n + 0.4);

    // |P| below the rounding level of Horner's scheme means converged
    auto rounding_level = [&](cplx w) {
        double aw = std::abs(w), acc = 1.0;
        for (cplx a : p.coeffs) acc = acc * aw + std::abs(a);
        return 8.0 * eps * acc;
    };

    std::vector<bool> done(static_cast<std::size_t>(n), false);
    for (int it = 0; it < max_iterations; ++it) {
        bool all_done = true;
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (done[j]) continue;
            auto [pv, dpv] = p.value_and_derivative(z[j]);
            if (std::abs(pv) <= rounding_level(z[j])) {
                done[j] = true;
                continue;
            }
            all_done = false;
            cplx ratio = pv / dpv;
            cplx repulsion{0.0, 0.0};
            for (std::size_t k = 0; k < z.size(); ++k)
                if (k != j) repulsion += cplx{1.0, 0.0} / (z[j] - z[k]);
            cplx step = ratio / (cplx{1.0, 0.0} - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                // derivative vanished: nudge off the critical point
                step = cplx{eps * (1.0 + std::abs(z[j])), eps * (1.0 + std::abs(z[j]))};
            }
            z[j] -= step;
            if (std::abs(step) <= 2.0 * eps * std::abs(z[j])) done[j] = true;
        }
        if (all_done) break;
    }

    const double bar = tol * std::pow(1.0 + p.max_abs_coeff(), n);
    for (cplx r : z)
        if (!(std::abs(p(r)) <= bar))
            throw Error(ErrorCode::NoConvergence, "Aberth iteration did not reach the residual bound");
    std::sort(z.begin(), z.end(), lex_less);
    return z;
}

}  // namespace rootbranch
