#pragma once

// Infix expression syntax:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | 'x' | 'z' | 'i' | 'pi' | '(' expr ')'
//            | exp(expr) | sin(expr) | cos(expr) | pow(expr, ['-'] integer)
//            | guard(number; expr; expr) | split(number; expr; expr)
//
// Arguments are separated by ',' or ';'. Whitespace is insignificant.

#include <cctype>
#include <charconv>
#include <string>
#include <numbers>
#include <string_view>

#include "rootbranch/error.hpp"
#include "rootbranch/expression.hpp"

namespace rootbranch {

class ExprParser {
public:
    explicit ExprParser(std::string_view text, int line = 1, int column_offset = 0)
        : text_(text), line_(line), col0_(column_offset) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError(static_cast<std::size_t>(line_), static_cast<std::size_t>(col0_) + pos_ + 1, what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    void separator() {
        if (!accept(',') && !accept(';')) fail("expected ',' or ';'");
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept('+')) e = e + term();
            else if (accept('-')) e = e - term();
            else return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (accept('*')) {
                e = e * unary();
            } else if (accept('/')) {
                std::size_t at = pos_;
                Expr d = unary();
                if (d.is_zero()) {
                    pos_ = at;
                    fail("division by zero");
                }
                e = e / d;
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) return pow(base, integer());
        return base;
    }

    int integer() {
        skip_ws();
        bool neg = accept('-');
        skip_ws();
        int v = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc{} || ptr == text_.data() + pos_) fail("expected an integer exponent");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return neg ? -v : v;
    }

    double number() {
        skip_ws();
        bool neg = accept('-');
        skip_ws();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc{} || ptr == text_.data() + pos_) fail("expected a number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return neg ? -v : v;
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Expr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr(number());
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
        std::size_t start = pos_;
        std::string id = identifier();
        if (id == "x") return Expr::x();
        if (id == "z") return Expr::z();
        if (id == "i") return Expr(cplx{0.0, 1.0});
        if (id == "pi") return Expr(std::numbers::pi);
        if (id == "exp" || id == "sin" || id == "cos") {
            expect('(');
            Expr a = expr();
            expect(')');
            return id == "exp" ? exp(a) : id == "sin" ? sin(a) : cos(a);
        }
        if (id == "pow") {
            expect('(');
            Expr a = expr();
            separator();
            int k = integer();
            expect(')');
            return pow(a, k);
        }
        if (id == "guard" || id == "split") {
            expect('(');
            double point = number();
            separator();
            Expr a = expr();
            separator();
            Expr b = expr();
            expect(')');
            return id == "guard" ? guard(point, a, b) : split(point, a, b);
        }
        pos_ = start;
        fail("unknown identifier '" + id + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
    int col0_;
};

inline Expr parse_expression(std::string_view text, int line = 1, int column_offset = 0) {
    return ExprParser(text, line, column_offset).parse();
}

}  // namespace rootbranch
