#pragma once

// Radius selection around a known zero and the Rouché step certificate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>

#include "rootbranch/contour.hpp"
#include "rootbranch/error.hpp"
#include "rootbranch/function_model.hpp"
#include "rootbranch/monic_poly.hpp"
#include "rootbranch/param_domain.hpp"

namespace rootbranch {

struct LocalFactorization {
    DomainPoint x0;
    double x = 0.0;  // coordinate of x0
    cplx z0{};
    double r = 0.0;
    double m = 0.0;  // min |F(x0,.)| over the nodes
    int n = 0;
    MonicPoly poly;        // P(x0,.) in z
    LocalPoly local;       // P(x0,.) in the disk frame
    ContourSamples boundary;  // F(x0,.) on the circle, M nodes

    Circle circle() const { return boundary.circle; }
};

struct LocalizerOptions {
    int samples = 128;
    int max_halvings = 40;
    bool check_degeneracy = true;
    /// |coefficient| bound for the disk-normalized factor shifted to its
    /// centroid; the zeros inside must form one cluster.
    double cluster_tol = 1e-8;
    double m_floor_rel = 1e-13;
};

namespace detail {

inline ContourSamples downsample(const ContourSamples& s, int samples) {
    const int stride = s.circle.samples / samples;
    ContourSamples out{s.circle, {}, {}};
    out.circle.samples = samples;
    for (int j = 0; j < samples; ++j) {
        out.f.push_back(s.f[static_cast<std::size_t>(j * stride)]);
        out.fz.push_back(s.fz[static_cast<std::size_t>(j * stride)]);
    }
    return out;
}

/// Largest coefficient of the disk-normalized factor after shifting to the
/// zeros' centroid; zero iff the zeros coincide.
inline double cluster_spread(const MonicPoly& q, cplx* centroid) {
    cplx mu = -q.coeffs[0] / static_cast<double>(q.degree());
    if (centroid) *centroid = mu;
    if (q.degree() == 1) return 0.0;
    return rescale(q, mu, 1.0).max_abs_coeff();
}

inline std::optional<LocalFactorization> try_radius(const EntireFunction& f, double x, cplx z0, double r,
                                                    const LocalizerOptions& opt) {
    Circle c{z0, r, opt.samples};
    ContourCount cc;
    try {
        cc = count_zeros_detailed(f, x, c);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ZeroOnContour || e.code() == ErrorCode::NonIntegerWinding ||
            e.code() == ErrorCode::NonFinite)
            return std::nullopt;
        throw;
    }
    if (cc.n < 1) return std::nullopt;
    ContourSamples boundary = downsample(cc.samples, opt.samples);
    double m = boundary.min_abs_f();
    if (!(m >= opt.m_floor_rel * (1.0 + boundary.max_abs_f()))) return std::nullopt;

    LocalPoly local = local_factor(cc.samples, cc.n);
    local.circle.samples = opt.samples;
    cplx mu;
    if (cluster_spread(local.normalized, &mu) > opt.cluster_tol || std::abs(mu) > 0.25) return std::nullopt;
    try {
        check_cofactor(f, x, local);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CofactorVanishes || e.code() == ErrorCode::NonFinite) return std::nullopt;
        throw;
    }
    LocalFactorization loc;
    loc.x = x;
    loc.z0 = z0;
    loc.r = r;
    loc.m = m;
    loc.n = cc.n;
    loc.poly = local.in_z();
    loc.local = std::move(local);
    loc.boundary = std::move(boundary);
    return loc;
}

}  // namespace detail

/// Scans r = r_max * 2^-j and returns the first disk around z0 holding a
/// single cluster of zeros with a certified boundary minimum.
inline LocalFactorization select_radius(const EntireFunction& f, double x, cplx z0, double r_max,
                                        const LocalizerOptions& opt = {}) {
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw Error(ErrorCode::InvalidArgument, "r_max must be positive");
    if (!detail::finite(z0)) throw Error(ErrorCode::InvalidArgument, "z0 is not finite");
    if (opt.check_degeneracy && degeneracy_probe(f, x).degenerate)
        throw Error(ErrorCode::DegenerateAtPoint, "F(x0,.) is constant");
    double r = r_max;
    for (int j = 0; j <= opt.max_halvings; ++j, r *= 0.5) {
        if (auto loc = detail::try_radius(f, x, z0, r, opt)) return std::move(*loc);
    }
    throw Error(ErrorCode::NoRadiusFound, "no isolating radius found around z0");
}

inline LocalFactorization select_radius(const EntireFunction& f, const ParamDomain& d, const DomainPoint& x0,
                                        cplx z0, double r_max, const LocalizerOptions& opt = {}) {
    LocalFactorization loc = select_radius(f, d.coordinate(x0), z0, r_max, opt);
    loc.x0 = x0;
    return loc;
}

struct StepCheck {
    bool accepted = false;
    double excess = 0.0;     // max node |F(x1,z) - F(x0,z)|
    double threshold = 0.0;  // safety * m
    int nodes = 0;           // node count used for the decision
};

/// Rouché test for a parameter step: accepted iff the perturbation stays
/// below safety*m at every node. Margins within 2x of the threshold are
/// re-checked on twice as many nodes.
inline StepCheck validate_step(const EntireFunction& f, const LocalFactorization& loc, double x1, double safety) {
    if (!(safety > 0.0 && safety < 1.0)) throw Error(ErrorCode::InvalidArgument, "safety must lie in (0,1)");
    StepCheck out;
    out.threshold = safety * loc.m;
    const Circle& c = loc.boundary.circle;
    out.nodes = c.samples;
    if (x1 == loc.x) {
        out.accepted = true;
        return out;
    }
    auto perturbation = [&](cplx z, cplx f0) {
        cplx v = f.raw(x1, z);
        double d = std::abs(v - f0);
        return detail::finite(v) ? d : std::numeric_limits<double>::infinity();
    };
    for (int j = 0; j < c.samples; ++j) {
        out.excess = std::max(out.excess, perturbation(c.node(j), loc.boundary.f[static_cast<std::size_t>(j)]));
        if (!(out.excess <= out.threshold)) return out;
    }
    if (out.excess > 0.5 * out.threshold) {
        Circle fine = c;
        fine.samples *= 2;
        out.nodes = fine.samples;
        for (int j = 1; j < fine.samples; j += 2) {
            cplx z = fine.node(j);
            cplx f0 = f.raw(loc.x, z);
            out.excess = std::max(out.excess, perturbation(z, f0));
            if (!(out.excess <= out.threshold)) return out;
        }
    }
    out.accepted = true;
    return out;
}

inline StepCheck validate_step(const EntireFunction& f, const ParamDomain& d, const LocalFactorization& loc,
                               const DomainPoint& x1, double safety) {
    if (!d.contains(x1)) throw Error(ErrorCode::OutOfDomain, "step target not in domain");
    return validate_step(f, loc, d.coordinate(x1), safety);
}

struct Polished {
    cplx z{};
    double residual = 0.0;
    int iterations = 0;
};

/// Newton iteration in z; keeps the best iterate by residual.
inline Polished newton_polish(const EntireFunction& f, double x, cplx z, int max_iterations = 8) {
    Polished best{z, std::abs(eval(f, x, z)), 0};
    cplx cur = z;
    for (int it = 1; it <= max_iterations; ++it) {
        auto [v, dv] = f.raw_both(x, cur);
        if (!detail::finite(v) || !detail::finite(dv) || dv == cplx{0.0, 0.0}) break;
        cplx step = v / dv;
        cur -= step;
        cplx nv = f.raw(x, cur);
        if (!detail::finite(nv)) break;
        double res = std::abs(nv);
        if (res < best.residual) best = {cur, res, it};
        if (res == 0.0 || std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(cur)) break;
    }
    return best;
}

}  // namespace rootbranch
