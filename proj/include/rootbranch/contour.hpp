#pragma once

// Zero counting, contour power sums and local monic factors on circles.
//
// All integrals are trapezoidal sums over equispaced nodes, which converge
// geometrically for integrands analytic in an annulus around the circle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rootbranch/error.hpp"
#include "rootbranch/function_model.hpp"
#include "rootbranch/monic_poly.hpp"

namespace rootbranch {

struct Circle {
    cplx center{};
    double radius = 1.0;
    int samples = 128;  // power of two, >= 16

    cplx node(int j) const {
        return center + std::polar(radius, 2.0 * std::numbers::pi * j / samples);
    }
};

/// Zero-on-contour guard: every node must satisfy
///   |F(z_j)| >= kContourGuard * |F_z(z_j)| * (node spacing)
/// so that no zero sits between neighbouring nodes, and
///   |F(z_j)| >= kContourFloor * (1 + max|F|).
inline constexpr double kContourGuard = 1.0;
inline constexpr double kContourFloor = 1e-12;

/// F and F_z at the nodes of a circle.
struct ContourSamples {
    Circle circle;
    std::vector<cplx> f;
    std::vector<cplx> fz;

    double min_abs_f() const {
        double m = std::abs(f.front());
        for (cplx v : f) m = std::min(m, std::abs(v));
        return m;
    }

    double max_abs_f() const {
        double m = 0.0;
        for (cplx v : f) m = std::max(m, std::abs(v));
        return m;
    }

    double max_abs_fz() const {
        double m = 0.0;
        for (cplx v : fz) m = std::max(m, std::abs(v));
        return m;
    }
};

namespace detail {

inline void validate_circle(const Circle& c) {
    if (!(c.radius > 0.0) || !std::isfinite(c.radius))
        throw Error(ErrorCode::InvalidArgument, "circle radius must be positive");
    if (c.samples < 16 || (c.samples & (c.samples - 1)) != 0)
        throw Error(ErrorCode::InvalidArgument, "circle samples must be a power of two >= 16");
}

inline void sample_node(const EntireFunction& f, double x, cplx z, cplx& fv, cplx& fzv) {
    auto [a, b] = f.raw_both(x, z);
    if (!finite(a) || !finite(b)) throw Error(ErrorCode::NonFinite, "F overflowed on the contour");
    fv = a;
    fzv = b;
}

}  // namespace detail

inline ContourSamples sample_circle(const EntireFunction& f, double x, const Circle& c) {
    detail::validate_circle(c);
    if (!std::isfinite(x)) throw Error(ErrorCode::OutOfDomain, "parameter coordinate is not finite");
    ContourSamples s{c, std::vector<cplx>(static_cast<std::size_t>(c.samples)),
                     std::vector<cplx>(static_cast<std::size_t>(c.samples))};
    for (int j = 0; j < c.samples; ++j)
        detail::sample_node(f, x, c.node(j), s.f[static_cast<std::size_t>(j)], s.fz[static_cast<std::size_t>(j)]);
    return s;
}

/// Doubles the node count, reusing the existing nodes as the even ones.
inline ContourSamples refine(const EntireFunction& f, double x, const ContourSamples& s) {
    Circle c = s.circle;
    c.samples *= 2;
    ContourSamples out{c, std::vector<cplx>(static_cast<std::size_t>(c.samples)),
                       std::vector<cplx>(static_cast<std::size_t>(c.samples))};
    for (int j = 0; j < c.samples; ++j) {
        auto k = static_cast<std::size_t>(j);
        if (j % 2 == 0) {
            out.f[k] = s.f[k / 2];
            out.fz[k] = s.fz[k / 2];
        } else {
            detail::sample_node(f, x, c.node(j), out.f[k], out.fz[k]);
        }
    }
    return out;
}

/// Throws ZeroOnContour when a zero of F may lie on or too near the circle.
inline void check_contour(const ContourSamples& s) {
    const double spacing = 2.0 * std::numbers::pi * s.circle.radius / s.circle.samples;
    if (!(s.min_abs_f() >= kContourFloor * (1.0 + s.max_abs_f())))
        throw Error(ErrorCode::ZeroOnContour, "|F| on the contour is below the floor");
    for (std::size_t j = 0; j < s.f.size(); ++j)
        if (!(std::abs(s.f[j]) >= kContourGuard * std::abs(s.fz[j]) * spacing))
            throw Error(ErrorCode::ZeroOnContour, "a zero of F may lie between contour nodes");
}

/// (1/M) * sum_j (z_j - c)^{k+1} F_z/F, i.e. the k-th centred moment of the
/// zeros, for k = 0..kmax. Divided by r^k when `normalized`.
inline std::vector<cplx> centred_moments(const ContourSamples& s, int kmax, bool normalized) {
    const int m = s.circle.samples;
    std::vector<cplx> out(static_cast<std::size_t>(kmax + 1), cplx{0.0, 0.0});
    for (int j = 0; j < m; ++j) {
        auto idx = static_cast<std::size_t>(j);
        cplx unit = std::polar(1.0, 2.0 * std::numbers::pi * j / m);
        cplx q = s.circle.radius * unit * s.fz[idx] / s.f[idx];
        cplx w = normalized ? unit : s.circle.radius * unit;
        cplx wk{1.0, 0.0};
        for (int k = 0; k <= kmax; ++k) {
            out[static_cast<std::size_t>(k)] += wk * q;
            wk *= w;
        }
    }
    for (cplx& v : out) v /= static_cast<double>(m);
    return out;
}

inline double winding_number_estimate(const ContourSamples& s, double* imag_part = nullptr) {
    cplx w = centred_moments(s, 0, true)[0];
    if (imag_part) *imag_part = w.imag();
    return w.real();
}

struct ContourCount {
    int n = 0;
    ContourSamples samples;  // the finest node set used
};

namespace detail {

inline bool near_integer(const ContourSamples& s, long& rounded) {
    double im = 0.0;
    double re = winding_number_estimate(s, &im);
    rounded = std::lround(re);
    return std::abs(re - static_cast<double>(rounded)) <= 0.25 && std::abs(im) <= 0.25;
}

}  // namespace detail

/// Zero count with the node set that produced it. The count must agree
/// between M and 2M nodes (or 2M and 4M) to be accepted.
inline ContourCount count_zeros_detailed(const EntireFunction& f, double x, const Circle& c) {
    ContourSamples s = sample_circle(f, x, c);
    check_contour(s);
    long prev = 0;
    bool prev_ok = detail::near_integer(s, prev);
    for (int doubling = 0; doubling < 2; ++doubling) {
        ContourSamples finer = refine(f, x, s);
        check_contour(finer);
        long cur = 0;
        bool ok = detail::near_integer(finer, cur);
        if (prev_ok && ok && prev == cur) return {static_cast<int>(cur), std::move(finer)};
        s = std::move(finer);
        prev = cur;
        prev_ok = ok;
    }
    throw Error(ErrorCode::NonIntegerWinding, "argument-principle quadrature did not converge");
}

/// Number of zeros of F(x,.) inside the circle, with multiplicity.
inline int count_zeros(const EntireFunction& f, double x, const Circle& c) {
    return count_zeros_detailed(f, x, c).n;
}

/// s_k = (1/2 pi i) \oint z^k F_z/F dz for k = 0..n on the circle's nodes.
inline PowerSums power_sums(const EntireFunction& f, double x, const Circle& c, int n) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative zero count");
    ContourSamples s = sample_circle(f, x, c);
    check_contour(s);
    PowerSums ps;
    ps.s.assign(static_cast<std::size_t>(n + 1), cplx{0.0, 0.0});
    const int m = c.samples;
    for (int j = 0; j < m; ++j) {
        auto idx = static_cast<std::size_t>(j);
        cplx z = c.node(j);
        cplx q = (z - c.center) * s.fz[idx] / s.f[idx];
        cplx zk{1.0, 0.0};
        for (int k = 0; k <= n; ++k) {
            ps.s[static_cast<std::size_t>(k)] += zk * q;
            zk *= z;
        }
    }
    for (cplx& v : ps.s) v /= static_cast<double>(m);
    if (std::abs(ps.s[0] - cplx{static_cast<double>(n), 0.0}) > 0.25)
        throw Error(ErrorCode::NonIntegerWinding, "s_0 does not match the zero count");
    return ps;
}

/// The monic factor P of F on a disk, stored in the disk's own frame:
/// P(z) = r^n * Q((z - c)/r) with Q's zeros in the unit disk.
struct LocalPoly {
    Circle circle;
    MonicPoly normalized;

    int degree() const { return normalized.degree(); }

    MonicPoly in_z() const { return unscale(normalized, circle.center, circle.radius); }

    cplx operator()(cplx z) const {
        return std::pow(circle.radius, degree()) * normalized((z - circle.center) / circle.radius);
    }

    std::vector<cplx> roots(double tol = 1e-12) const {
        std::vector<cplx> w = poly_roots(normalized, tol);
        for (cplx& r : w) r = circle.center + circle.radius * r;
        std::sort(w.begin(), w.end(), lex_less);
        return w;
    }
};

/// Floor on min|G| / max|G| for the cofactor G = F/P on interior probe circles.
inline constexpr double kCofactorFloor = 1e-10;

/// Checks that G = F/P does not vanish on the probe circles at 0.5r and 0.75r.
/// Probes where P itself vanishes numerically are skipped (G := 1 there).
inline void check_cofactor(const EntireFunction& f, double x, const LocalPoly& p) {
    const Circle& c = p.circle;
    std::vector<double> g;
    std::vector<double> pabs;
    std::vector<cplx> gvals;
    g.reserve(2 * static_cast<std::size_t>(c.samples));
    for (double frac : {0.5, 0.75}) {
        for (int j = 0; j < c.samples; ++j) {
            cplx z = c.center + std::polar(frac * c.radius, 2.0 * std::numbers::pi * (j + 0.5) / c.samples);
            cplx fv = f.raw(x, z);
            cplx pv = p(z);
            if (!detail::finite(fv)) throw Error(ErrorCode::NonFinite, "F overflowed inside the disk");
            pabs.push_back(std::abs(pv));
            gvals.push_back(fv / pv);
        }
    }
    double pmax = *std::max_element(pabs.begin(), pabs.end());
    double gmax = 0.0, gmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gvals.size(); ++i) {
        if (pabs[i] <= 1e-12 * pmax) continue;
        double a = std::abs(gvals[i]);
        if (!std::isfinite(a)) continue;
        gmax = std::max(gmax, a);
        gmin = std::min(gmin, a);
    }
    if (!(gmax > 0.0) || !(gmin >= kCofactorFloor * gmax))
        throw Error(ErrorCode::CofactorVanishes, "F/P nearly vanishes inside the disk; shrink the radius");
}

/// Local factor from already-counted samples (n zeros inside).
inline LocalPoly local_factor(const ContourSamples& s, int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "no zeros inside the circle");
    std::vector<cplx> u = centred_moments(s, n, true);
    PowerSums ps{std::move(u)};
    ps.s[0] = cplx{static_cast<double>(n), 0.0};
    return LocalPoly{s.circle, newton_to_coeffs(ps)};
}

/// Counts the zeros, extracts their power sums and returns the monic factor
/// in the disk's frame; verifies that the cofactor does not vanish.
inline LocalPoly local_factor(const EntireFunction& f, double x, const Circle& c, bool check_g = true) {
    ContourCount cc = count_zeros_detailed(f, x, c);
    if (cc.n < 1) throw Error(ErrorCode::InvalidArgument, "no zeros inside the circle");
    LocalPoly p = local_factor(cc.samples, cc.n);
    p.circle.samples = c.samples;
    if (check_g) check_cofactor(f, x, p);
    return p;
}

/// P(x,z) with F = P*G on the disk, as z^n + a_1 z^{n-1} + ... + a_n.
inline MonicPoly local_monic_factor(const EntireFunction& f, double x, const Circle& c) {
    return local_factor(f, x, c).in_z();
}

}  // namespace rootbranch
