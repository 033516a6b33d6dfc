#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rootbranch/error.hpp"
#include "rootbranch/expression.hpp"
#include "rootbranch/param_domain.hpp"

namespace rootbranch {

namespace detail {

struct Instr {
    Op op = Op::Const;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    cplx value{};
    double at = 0.0;
    int exponent = 0;
    bool minus_one = false;  // exp(a) - 1 evaluated without cancellation
};

inline cplx expm1(cplx a) {
    double s = std::sin(0.5 * a.imag());
    return {std::expm1(a.real()) * std::cos(a.imag()) - 2.0 * s * s, std::exp(a.real()) * std::sin(a.imag())};
}

/// Straight-line program for a set of expression roots; shared subtrees are
/// emitted once. Children always precede parents.
class Tape {
public:
    Tape() = default;

    explicit Tape(const std::vector<Expr>& roots) {
        std::unordered_map<const ExprNode*, std::uint32_t> seen;
        for (const Expr& r : roots) outputs_.push_back(emit(*r.ptr(), seen));
    }

    std::size_t size() const { return code_.size(); }

    template <std::size_t N>
    void run(double x, cplx z, std::array<cplx, N>& out) const {
        constexpr std::size_t inline_size = 96;
        if (code_.size() <= inline_size) {
            std::array<cplx, inline_size> regs;
            execute(x, z, regs.data());
            for (std::size_t i = 0; i < N; ++i) out[i] = regs[outputs_[i]];
        } else {
            std::vector<cplx> regs(code_.size());
            execute(x, z, regs.data());
            for (std::size_t i = 0; i < N; ++i) out[i] = regs[outputs_[i]];
        }
    }

private:
    std::uint32_t emit(const ExprNode& n, std::unordered_map<const ExprNode*, std::uint32_t>& seen) {
        if (auto it = seen.find(&n); it != seen.end()) return it->second;
        Instr ins{n.op, 0, 0, n.value, n.at, n.exponent, false};
        if (n.op == Op::Sub && n.lhs->op == Op::Exp && n.rhs->op == Op::Const && n.rhs->value == cplx{1.0, 0.0}) {
            ins.op = Op::Exp;
            ins.minus_one = true;
            ins.a = emit(*n.lhs->lhs, seen);
        } else {
            if (n.lhs) ins.a = emit(*n.lhs, seen);
            if (n.rhs) ins.b = emit(*n.rhs, seen);
        }
        code_.push_back(ins);
        auto idx = static_cast<std::uint32_t>(code_.size() - 1);
        seen.emplace(&n, idx);
        return idx;
    }

    void execute(double x, cplx z, cplx* r) const {
        const std::size_t n = code_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Instr& c = code_[i];
            switch (c.op) {
                case Op::Const: r[i] = c.value; break;
                case Op::X: r[i] = cplx{x, 0.0}; break;
                case Op::Z: r[i] = z; break;
                case Op::Add: r[i] = r[c.a] + r[c.b]; break;
                case Op::Sub: r[i] = r[c.a] - r[c.b]; break;
                case Op::Mul: r[i] = r[c.a] * r[c.b]; break;
                case Op::Div: r[i] = r[c.a] / r[c.b]; break;
                case Op::Neg: r[i] = -r[c.a]; break;
                case Op::Exp: r[i] = c.minus_one ? expm1(r[c.a]) : std::exp(r[c.a]); break;
                case Op::Sin: r[i] = std::sin(r[c.a]); break;
                case Op::Cos: r[i] = std::cos(r[c.a]); break;
                case Op::Pow: r[i] = ipow(r[c.a], c.exponent); break;
                case Op::Guard: r[i] = x == c.at ? r[c.a] : r[c.b]; break;
                case Op::Split: r[i] = x < c.at ? r[c.a] : r[c.b]; break;
            }
        }
    }

    std::vector<Instr> code_;
    std::vector<std::uint32_t> outputs_;
};

inline bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace detail

/// F(x,z) given as an expression, entire in z and continuous in x. Immutable.
class EntireFunction {
public:
    explicit EntireFunction(Expr expr, std::optional<int> truncation_order = std::nullopt)
        : expr_(std::move(expr)),
          dz_(derivative_z(expr_)),
          truncation_order_(truncation_order),
          f_tape_({expr_}),
          fz_tape_({dz_}),
          both_tape_({expr_, dz_}) {}

    const Expr& expr() const { return expr_; }
    const Expr& dz_expr() const { return dz_; }
    std::optional<int> truncation_order() const { return truncation_order_; }

    /// Evaluates without error checking; the result may be non-finite.
    cplx raw(double x, cplx z) const {
        std::array<cplx, 1> out;
        f_tape_.run(x, z, out);
        return out[0];
    }

    cplx raw_dz(double x, cplx z) const {
        std::array<cplx, 1> out;
        fz_tape_.run(x, z, out);
        return out[0];
    }

    /// F and dF/dz in one pass over the shared program.
    std::pair<cplx, cplx> raw_both(double x, cplx z) const {
        std::array<cplx, 2> out;
        both_tape_.run(x, z, out);
        return {out[0], out[1]};
    }

    /// c * F, used by the rescaling properties.
    EntireFunction scaled(cplx c) const { return EntireFunction(Expr(c) * expr_, truncation_order_); }

private:
    Expr expr_;
    Expr dz_;
    std::optional<int> truncation_order_;
    detail::Tape f_tape_;
    detail::Tape fz_tape_;
    detail::Tape both_tape_;
};

/// Truncated power series a_0(x) + a_1(x) z + ... + a_N(x) z^N.
struct SeriesForm {
    std::vector<Expr> coefficients;

    int order() const { return static_cast<int>(coefficients.size()) - 1; }

    EntireFunction to_function() const {
        if (coefficients.empty()) throw Error(ErrorCode::InvalidArgument, "series needs at least one coefficient");
        for (const Expr& a : coefficients)
            if (a.depends_on_z()) throw Error(ErrorCode::InvalidArgument, "series coefficients must not depend on z");
        // Horner form of the same polynomial in z
        Expr acc = coefficients.back();
        for (std::size_t n = coefficients.size() - 1; n-- > 0;) acc = acc * Expr::z() + coefficients[n];
        return EntireFunction(acc, order());
    }
};

namespace detail {

inline void check_args(double x, cplx z) {
    if (!std::isfinite(x)) throw Error(ErrorCode::OutOfDomain, "parameter coordinate is not finite");
    if (!finite(z)) throw Error(ErrorCode::InvalidArgument, "z is not finite");
}

}  // namespace detail

/// F(x,z) at parameter coordinate x.
inline cplx eval(const EntireFunction& f, double x, cplx z) {
    detail::check_args(x, z);
    cplx v = f.raw(x, z);
    if (!detail::finite(v)) throw Error(ErrorCode::NonFinite, "F overflowed; shrink |z|");
    return v;
}

inline cplx eval(const EntireFunction& f, const ParamDomain& d, const DomainPoint& p, cplx z) {
    return eval(f, d.coordinate(p), z);
}

/// dF/dz(x,z) from the symbolic derivative.
inline cplx eval_dz(const EntireFunction& f, double x, cplx z) {
    detail::check_args(x, z);
    cplx v = f.raw_dz(x, z);
    if (!detail::finite(v)) throw Error(ErrorCode::NonFinite, "dF/dz overflowed; shrink |z|");
    return v;
}

inline cplx eval_dz(const EntireFunction& f, const ParamDomain& d, const DomainPoint& p, cplx z) {
    return eval_dz(f, d.coordinate(p), z);
}

struct DegeneracyReport {
    bool degenerate = false;
    cplx constant{};      // common value when degenerate
    cplx witness_a{};     // two sample points with the largest value difference
    cplx witness_b{};
    cplx value_a{};
    cplx value_b{};
    double deviation = 0.0;  // max pairwise |F(z) - F(z')| over the samples
    double tolerance = 0.0;
};

/// Samples z -> F(x0,z) at the origin and on circles |z| = r_i; the map is
/// reported constant when every pairwise difference is below `tol`.
inline DegeneracyReport degeneracy_probe(const EntireFunction& f, double x0, const std::vector<double>& radii,
                                         int samples_per_circle, double tol) {
    if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "degeneracy probe needs at least one radius");
    if (samples_per_circle < 8) throw Error(ErrorCode::InvalidArgument, "degeneracy probe needs >= 8 samples");
    std::vector<cplx> pts{cplx{0.0, 0.0}};
    for (double r : radii) {
        if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "probe radii must be positive");
        for (int j = 0; j < samples_per_circle; ++j)
            pts.push_back(std::polar(r, 2.0 * std::numbers::pi * j / samples_per_circle));
    }
    std::vector<cplx> vals;
    vals.reserve(pts.size());
    for (cplx z : pts) vals.push_back(eval(f, x0, z));

    DegeneracyReport rep;
    rep.tolerance = tol;
    std::size_t ia = 0, ib = 0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j) {
            double dev = std::abs(vals[i] - vals[j]);
            if (dev > rep.deviation) {
                rep.deviation = dev;
                ia = i;
                ib = j;
            }
        }
    rep.witness_a = pts[ia];
    rep.witness_b = pts[ib];
    rep.value_a = vals[ia];
    rep.value_b = vals[ib];
    rep.degenerate = rep.deviation < tol;
    if (rep.degenerate) rep.constant = vals[0];
    return rep;
}

/// Default probe: radii {1, 10}, 64 samples per circle, tolerance
/// 1e-10 * (1 + max |F| over the samples).
inline DegeneracyReport degeneracy_probe(const EntireFunction& f, double x0) {
    const std::vector<double> radii{1.0, 10.0};
    constexpr int samples = 64;
    double scale = std::abs(eval(f, x0, 0.0));
    for (double r : radii)
        for (int j = 0; j < samples; ++j)
            scale = std::max(scale, std::abs(eval(f, x0, std::polar(r, 2.0 * std::numbers::pi * j / samples))));
    return degeneracy_probe(f, x0, radii, samples, 1e-10 * (1.0 + scale));
}

inline DegeneracyReport degeneracy_probe(const EntireFunction& f, const ParamDomain& d, const DomainPoint& p) {
    return degeneracy_probe(f, d.coordinate(p));
}

namespace detail {

inline void collect_piecewise(const ExprNode& n, std::vector<const ExprNode*>& out) {
    if (n.op == Op::Guard || n.op == Op::Split) out.push_back(&n);
    if (n.lhs) collect_piecewise(*n.lhs, out);
    if (n.rhs) collect_piecewise(*n.rhs, out);
}

}  // namespace detail

/// Checks the piecewise nodes of F against a domain: guard points must be
/// vertex coordinates, and F must be continuous in x across every guard and
/// split point when sampled at a few z. Throws ValidationError otherwise.
inline void validate_piecewise(const EntireFunction& f, const ParamDomain& d) {
    std::vector<const ExprNode*> nodes;
    detail::collect_piecewise(f.expr().node(), nodes);
    if (nodes.empty()) return;

    double lo = d.vertices().front().coordinate, hi = lo;
    for (const TreeVertex& v : d.vertices()) {
        lo = std::min(lo, v.coordinate);
        hi = std::max(hi, v.coordinate);
    }
    const std::array<cplx, 5> probes{cplx{0.0, 0.0}, cplx{0.5, 0.0}, cplx{0.0, -0.5}, cplx{1.0, 1.0},
                                     cplx{-1.0, 0.25}};
    constexpr double rel_tol = 1e-6;

    for (const ExprNode* n : nodes) {
        double p = n->at;
        if (n->op == Op::Guard) {
            bool on_vertex = std::any_of(d.vertices().begin(), d.vertices().end(),
                                         [&](const TreeVertex& v) { return v.coordinate == p; });
            if (!on_vertex)
                throw Error(ErrorCode::ValidationError,
                            "guard point " + format_double(p) + " is not a domain vertex coordinate");
        }
        if (p < lo || p > hi) continue;
        double delta = 1e-8 * std::max(1.0, std::abs(p));
        for (cplx z : probes) {
            cplx at = f.raw(p, z);
            if (!detail::finite(at))
                throw Error(ErrorCode::ValidationError, "F is not finite at piecewise point " + format_double(p));
            for (double side : {-1.0, 1.0}) {
                double xs = p + side * delta;
                if (xs < lo || xs > hi) continue;
                cplx near = f.raw(xs, z);
                if (!detail::finite(near) || std::abs(near - at) > rel_tol * (1.0 + std::abs(at)))
                    throw Error(ErrorCode::ValidationError,
                                "F is discontinuous in x at piecewise point " + format_double(p));
            }
        }
    }
}

}  // namespace rootbranch
