#pragma once

// Immutable expression trees over a real parameter x and a complex variable z.

#include <cmath>
#include <complex>
#include <charconv>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

#include "rootbranch/error.hpp"

namespace rootbranch {

using cplx = std::complex<double>;

enum class Op : unsigned char {
    Const,
    X,
    Z,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Exp,
    Sin,
    Cos,
    Pow,    // integer power, exponent may be negative
    Guard,  // lhs at x == at, rhs elsewhere
    Split,  // lhs for x < at, rhs for x >= at
};

struct ExprNode {
    Op op = Op::Const;
    cplx value{};
    double at = 0.0;
    int exponent = 0;
    std::shared_ptr<const ExprNode> lhs;
    std::shared_ptr<const ExprNode> rhs;
};

class Expr {
public:
    Expr() : Expr(cplx{0.0, 0.0}) {}
    // Signed zeros are normalized so constants render and re-parse identically.
    Expr(cplx c)
        : node_(make({Op::Const, cplx{c.real() == 0.0 ? 0.0 : c.real(), c.imag() == 0.0 ? 0.0 : c.imag()},
                      0.0, 0, nullptr, nullptr})) {}
    Expr(double c) : Expr(cplx{c, 0.0}) {}

    static Expr x() { return Expr(make({Op::X, {}, 0.0, 0, nullptr, nullptr})); }
    static Expr z() { return Expr(make({Op::Z, {}, 0.0, 0, nullptr, nullptr})); }

    const ExprNode& node() const { return *node_; }
    const std::shared_ptr<const ExprNode>& ptr() const { return node_; }
    Op op() const { return node_->op; }
    Expr lhs() const { return Expr(node_->lhs); }
    Expr rhs() const { return Expr(node_->rhs); }

    bool is_const() const { return node_->op == Op::Const; }
    bool is_const(cplx c) const { return is_const() && node_->value == c; }
    bool is_zero() const { return is_const(cplx{0.0, 0.0}); }
    bool is_one() const { return is_const(cplx{1.0, 0.0}); }

    /// True if the subtree references z.
    bool depends_on_z() const { return depends(Op::Z); }
    bool depends_on_x() const {
        return depends(Op::X) || depends(Op::Guard) || depends(Op::Split);
    }

    static Expr from_node(ExprNode n) { return Expr(make(std::move(n))); }

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}

    static std::shared_ptr<const ExprNode> make(ExprNode n) {
        return std::make_shared<const ExprNode>(std::move(n));
    }

    bool depends(Op target) const {
        const ExprNode& n = *node_;
        if (n.op == target) return true;
        if (n.lhs && Expr(n.lhs).depends(target)) return true;
        if (n.rhs && Expr(n.rhs).depends(target)) return true;
        return false;
    }

    std::shared_ptr<const ExprNode> node_;
};

namespace detail {

inline Expr binary(Op op, const Expr& a, const Expr& b) {
    return Expr::from_node({op, {}, 0.0, 0, a.ptr(), b.ptr()});
}

inline Expr unary(Op op, const Expr& a, int exponent = 0) {
    return Expr::from_node({op, {}, 0.0, exponent, a.ptr(), nullptr});
}

inline cplx ipow(cplx base, int k) {
    if (k == 0) return {1.0, 0.0};
    bool invert = k < 0;
    unsigned e = invert ? static_cast<unsigned>(-(k + 1)) + 1u : static_cast<unsigned>(k);
    cplx result{1.0, 0.0};
    while (e) {
        if (e & 1u) result *= base;
        base *= base;
        e >>= 1u;
    }
    return invert ? cplx{1.0, 0.0} / result : result;
}

}  // namespace detail

// Builders fold constants and drop additive/multiplicative identities.

inline Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr(a.node().value + b.node().value);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return detail::binary(Op::Add, a, b);
}

inline Expr operator-(const Expr& a) {
    if (a.is_const()) return Expr(-a.node().value);
    if (a.op() == Op::Neg) return a.lhs();
    return detail::unary(Op::Neg, a);
}

inline Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr(a.node().value - b.node().value);
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    return detail::binary(Op::Sub, a, b);
}

inline Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return Expr(a.node().value * b.node().value);
    if (a.is_zero() || b.is_zero()) return Expr(0.0);
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    return detail::binary(Op::Mul, a, b);
}

inline Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by constant zero");
    if (a.is_const() && b.is_const()) return Expr(a.node().value / b.node().value);
    if (a.is_zero()) return Expr(0.0);
    if (b.is_one()) return a;
    return detail::binary(Op::Div, a, b);
}

inline Expr exp(const Expr& a) {
    if (a.is_const()) return Expr(std::exp(a.node().value));
    return detail::unary(Op::Exp, a);
}

inline Expr sin(const Expr& a) {
    if (a.is_const()) return Expr(std::sin(a.node().value));
    return detail::unary(Op::Sin, a);
}

inline Expr cos(const Expr& a) {
    if (a.is_const()) return Expr(std::cos(a.node().value));
    return detail::unary(Op::Cos, a);
}

inline Expr pow(const Expr& a, int k) {
    if (k == 0) return Expr(1.0);
    if (k == 1) return a;
    if (a.is_const()) return Expr(detail::ipow(a.node().value, k));
    return detail::unary(Op::Pow, a, k);
}

/// `at_point` where x == point exactly, `elsewhere` otherwise.
inline Expr guard(double point, const Expr& at_point, const Expr& elsewhere) {
    if (at_point.is_const() && elsewhere.is_const() && at_point.node().value == elsewhere.node().value)
        return at_point;
    return Expr::from_node({Op::Guard, {}, point, 0, at_point.ptr(), elsewhere.ptr()});
}

/// `below` for x < point, `above` for x >= point.
inline Expr split(double point, const Expr& below, const Expr& above) {
    if (below.is_const() && above.is_const() && below.node().value == above.node().value) return below;
    return Expr::from_node({Op::Split, {}, point, 0, below.ptr(), above.ptr()});
}

/// Exact symbolic derivative with respect to z.
inline Expr derivative_z(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.op) {
        case Op::Const:
        case Op::X: return Expr(0.0);
        case Op::Z: return Expr(1.0);
        case Op::Add: return derivative_z(e.lhs()) + derivative_z(e.rhs());
        case Op::Sub: return derivative_z(e.lhs()) - derivative_z(e.rhs());
        case Op::Mul:
            return derivative_z(e.lhs()) * e.rhs() + e.lhs() * derivative_z(e.rhs());
        case Op::Div: {
            Expr da = derivative_z(e.lhs());
            Expr db = derivative_z(e.rhs());
            if (db.is_zero()) return da / e.rhs();
            return (da * e.rhs() - e.lhs() * db) / pow(e.rhs(), 2);
        }
        case Op::Neg: return -derivative_z(e.lhs());
        case Op::Exp: return e * derivative_z(e.lhs());
        case Op::Sin: return cos(e.lhs()) * derivative_z(e.lhs());
        case Op::Cos: return -(sin(e.lhs()) * derivative_z(e.lhs()));
        case Op::Pow: {
            Expr da = derivative_z(e.lhs());
            if (da.is_zero()) return Expr(0.0);
            return Expr(static_cast<double>(n.exponent)) * pow(e.lhs(), n.exponent - 1) * da;
        }
        case Op::Guard: return guard(n.at, derivative_z(e.lhs()), derivative_z(e.rhs()));
        case Op::Split: return split(n.at, derivative_z(e.lhs()), derivative_z(e.rhs()));
    }
    throw Error(ErrorCode::InvalidArgument, "unknown expression node");
}

/// Shortest decimal that round-trips a double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline int precedence(const ExprNode& n) {
    switch (n.op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        case Op::Const:
            // negative or complex literals render parenthesized
            return 5;
        default: return 5;
    }
}

inline std::string render_const(cplx c) {
    if (c.imag() == 0.0) {
        if (c.real() < 0.0) return "(" + format_double(c.real()) + ")";
        return format_double(c.real());
    }
    std::string im = c.imag() < 0.0 ? "-" + format_double(-c.imag()) : format_double(c.imag());
    if (c.real() == 0.0) return "(" + im + "*i)";
    return "(" + format_double(c.real()) + (c.imag() < 0.0 ? "" : "+") + im + "*i)";
}

inline std::string render(const ExprNode& n);

inline std::string wrap(const ExprNode& child, int min_prec) {
    std::string s = render(child);
    return precedence(child) < min_prec ? "(" + s + ")" : s;
}

inline std::string render(const ExprNode& n) {
    switch (n.op) {
        case Op::Const: return render_const(n.value);
        case Op::X: return "x";
        case Op::Z: return "z";
        case Op::Add: return wrap(*n.lhs, 1) + " + " + wrap(*n.rhs, 2);
        case Op::Sub: return wrap(*n.lhs, 1) + " - " + wrap(*n.rhs, 2);
        case Op::Mul: return wrap(*n.lhs, 2) + "*" + wrap(*n.rhs, 3);
        case Op::Div: return wrap(*n.lhs, 2) + "/" + wrap(*n.rhs, 3);
        case Op::Neg: return "-" + wrap(*n.lhs, 4);
        case Op::Exp: return "exp(" + render(*n.lhs) + ")";
        case Op::Sin: return "sin(" + render(*n.lhs) + ")";
        case Op::Cos: return "cos(" + render(*n.lhs) + ")";
        case Op::Pow: return "pow(" + render(*n.lhs) + ", " + std::to_string(n.exponent) + ")";
        case Op::Guard:
            return "guard(" + format_double(n.at) + "; " + render(*n.lhs) + "; " + render(*n.rhs) + ")";
        case Op::Split:
            return "split(" + format_double(n.at) + "; " + render(*n.lhs) + "; " + render(*n.rhs) + ")";
    }
    return "?";
}

}  // namespace detail

/// Canonical text form; the expression parser reads it back to an identical tree.
inline std::string to_string(const Expr& e) { return detail::render(e.node()); }

}  // namespace rootbranch
