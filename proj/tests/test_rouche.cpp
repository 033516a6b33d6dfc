#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "rootbranch/parser.hpp"
#include "rootbranch/rouche.hpp"

using namespace rootbranch;

namespace {

EntireFunction fn(const char* text) { return EntireFunction(parse_expression(text)); }

ErrorCode code_of(const std::function<void()>& body) {
    try {
        body();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;  // unreachable in the tests below
}

}  // namespace

TEST(SelectRadius, SqrtExample) {
    LocalFactorization loc = select_radius(fn("z^2 - x"), 0.25, 0.5, 0.2);
    EXPECT_EQ(loc.r, 0.2);
    EXPECT_EQ(loc.n, 1);
    // the closest node to the other root is z = 0.3: |0.09 - 0.25| = 0.16
    EXPECT_NEAR(loc.m, 0.16, 1e-12);
    ASSERT_EQ(loc.poly.degree(), 1);
    EXPECT_NEAR(std::abs(loc.poly.coeffs[0] + 0.5), 0.0, 1e-10);
}

TEST(SelectRadius, ShrinksPastForeignZero) {
    // r = 1 holds both zeros and r = 0.5 passes through 1.5
    LocalFactorization loc = select_radius(fn("(z - 1)*(z - 1.5)"), 0.0, 1.0, 1.0);
    EXPECT_EQ(loc.n, 1);
    EXPECT_LT(loc.r, 0.5);
    EXPECT_NEAR(std::abs(loc.poly.coeffs[0] + 1.0), 0.0, 1e-9);
}

TEST(SelectRadius, DoubleZeroKeptTogether) {
    LocalFactorization loc = select_radius(fn("z^2 - x"), 0.0, 0.0, 0.5);
    EXPECT_EQ(loc.r, 0.5);
    EXPECT_EQ(loc.n, 2);
    for (cplx c : loc.poly.coeffs) EXPECT_LE(std::abs(c), 1e-9);
}

TEST(SelectRadius, Errors) {
    EXPECT_EQ(code_of([] { select_radius(fn("exp(x*z) - 1"), 0.0, 0.0, 1.0); }), ErrorCode::DegenerateAtPoint);
    EXPECT_EQ(code_of([] { select_radius(fn("x^2*z - x"), 0.0, 1.0, 1.0); }), ErrorCode::DegenerateAtPoint);
    // no zero near z0 = 3: every disk around it is empty
    EXPECT_EQ(code_of([] { select_radius(fn("z^2 - x"), 0.25, 3.0, 1.0); }), ErrorCode::NoRadiusFound);
    EXPECT_EQ(code_of([] { select_radius(fn("z"), 0.0, 0.0, 0.0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { select_radius(fn("z"), 0.0, 0.0, -1.0); }), ErrorCode::InvalidArgument);
}

TEST(SelectRadius, DomainOverload) {
    ParamDomain d = ParamDomain::interval();
    LocalFactorization loc = select_radius(fn("z^2 - x"), d, d.at(0.25), 0.5, 0.2);
    EXPECT_EQ(loc.x0, d.at(0.25));
    EXPECT_EQ(loc.x, 0.25);
}

TEST(ValidateStep, Examples) {
    EntireFunction sq = fn("z^2 - x");
    LocalFactorization a = select_radius(sq, 0.25, 0.5, 0.2);
    StepCheck s = validate_step(sq, a, 0.26, 0.5);
    EXPECT_TRUE(s.accepted);
    EXPECT_NEAR(s.excess, 0.01, 1e-15);
    EXPECT_NEAR(s.threshold, 0.08, 1e-12);

    EntireFunction ce = fn("x^2*z - x");
    LocalFactorization b = select_radius(ce, 1.0, 1.0, 0.5);
    EXPECT_EQ(b.r, 0.5);
    EXPECT_NEAR(b.m, 0.5, 1e-12);
    StepCheck t = validate_step(ce, b, 0.5, 0.5);
    EXPECT_FALSE(t.accepted);
    EXPECT_NEAR(t.excess, 0.625, 1e-12);
    EXPECT_NEAR(t.threshold, 0.25, 1e-12);

    StepCheck same = validate_step(sq, a, 0.25, 0.5);
    EXPECT_TRUE(same.accepted);
    EXPECT_EQ(same.excess, 0.0);
}

TEST(ValidateStep, SafetyRange) {
    EntireFunction sq = fn("z^2 - x");
    LocalFactorization a = select_radius(sq, 0.25, 0.5, 0.2);
    EXPECT_THROW(validate_step(sq, a, 0.26, 0.0), Error);
    EXPECT_THROW(validate_step(sq, a, 0.26, 1.0), Error);
    ParamDomain d = ParamDomain::interval();
    EXPECT_THROW(validate_step(sq, d, a, DomainPoint{DomainPoint::Kind::Edge, 3, 0.5}, 0.5), Error);
}

TEST(ValidateStep, MarginalCaseUsesFinerGrid) {
    EntireFunction sq = fn("z^2 - x");
    LocalFactorization a = select_radius(sq, 0.25, 0.5, 0.2);
    // excess 0.06 lies within 2x of the 0.08 threshold
    StepCheck s = validate_step(sq, a, 0.31, 0.5);
    EXPECT_TRUE(s.accepted);
    EXPECT_EQ(s.nodes, 256);
    StepCheck quick = validate_step(sq, a, 0.27, 0.5);
    EXPECT_EQ(quick.nodes, 128);
}

TEST(NewtonPolish, ConvergesAndKeepsBest) {
    Polished p = newton_polish(fn("z^2 - x"), 2.0, 1.5);
    EXPECT_NEAR(std::abs(p.z - std::sqrt(2.0)), 0.0, 1e-14);
    EXPECT_LE(p.residual, 1e-15);
    // flat derivative at the start: the seed is returned
    Polished q = newton_polish(fn("z^2 - x"), 1.0, 0.0);
    EXPECT_EQ(q.z, cplx(0.0, 0.0));
    EXPECT_EQ(q.iterations, 0);
}

namespace {

struct RandomCase {
    std::vector<cplx> a, b;  // roots r_k(x) = a_k + b_k x
    EntireFunction f;
};

RandomCase random_case(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RandomCase rc{{}, {}, EntireFunction(Expr(1.0))};
    Expr e(1.0);
    for (int k = 0; k < n; ++k) {
        rc.a.emplace_back(2.0 * u(rng), 2.0 * u(rng));
        rc.b.emplace_back(u(rng), u(rng));
        e = e * (Expr::z() - Expr(rc.a.back()) - Expr(rc.b.back()) * Expr::x());
    }
    rc.f = EntireFunction(e);
    return rc;
}

}  // namespace

TEST(Property, SafetyIsMonotone) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        RandomCase rc = random_case(rng, 1 + trial % 5);
        double x0 = u(rng);
        cplx z0 = rc.a[0] + rc.b[0] * x0;
        LocalFactorization loc = select_radius(rc.f, x0, z0, 1.0);
        double x1 = std::min(1.0, x0 + 0.05 * u(rng));
        bool prev = false;
        for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            bool ok = validate_step(rc.f, loc, x1, s).accepted;
            EXPECT_TRUE(!prev || ok) << "acceptance must persist as safety grows";
            prev = ok;
        }
    }
}

TEST(Property, AcceptedStepPreservesCount) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int accepted = 0;
    for (int trial = 0; trial < 200; ++trial) {
        RandomCase rc = random_case(rng, 1 + trial % 6);
        double x0 = u(rng);
        cplx z0 = rc.a[0] + rc.b[0] * x0;
        LocalFactorization loc = select_radius(rc.f, x0, z0, 1.0);
        double x1 = std::clamp(x0 + 0.2 * (u(rng) - 0.5), 0.0, 1.0);
        if (!validate_step(rc.f, loc, x1, 0.5).accepted) continue;
        ++accepted;
        // oracle: count the explicit roots at x1 inside the circle
        int inside = 0;
        for (std::size_t k = 0; k < rc.a.size(); ++k) inside += std::abs(rc.a[k] + rc.b[k] * x1 - loc.z0) < loc.r;
        EXPECT_EQ(inside, loc.n);
        EXPECT_EQ(count_zeros(rc.f, x1, loc.circle()), loc.n);
    }
    EXPECT_GT(accepted, 50);
}

TEST(Property, LocalizedFactorMatchesOracle) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        RandomCase rc = random_case(rng, 1 + trial % 6);
        double x0 = u(rng);
        cplx z0 = rc.a[0] + rc.b[0] * x0;
        LocalFactorization loc = select_radius(rc.f, x0, z0, 1.0);
        EXPECT_GE(loc.n, 1);
        EXPECT_GT(loc.m, 0.0);
        std::vector<cplx> inside;
        for (std::size_t k = 0; k < rc.a.size(); ++k) {
            cplx r = rc.a[k] + rc.b[k] * x0;
            if (std::abs(r - z0) < loc.r) inside.push_back(r);
        }
        ASSERT_EQ(static_cast<int>(inside.size()), loc.n);
        // trapezoid aliasing decays like rho^M, rho the worst root-to-circle ratio
        double rho = 0.0;
        for (std::size_t k = 0; k < rc.a.size(); ++k) {
            double q = std::abs(rc.a[k] + rc.b[k] * x0 - z0) / loc.r;
            rho = std::max(rho, q < 1.0 ? q : 1.0 / q);
        }
        double alias = 1e-10 + 100.0 * std::pow(rho, loc.boundary.circle.samples);
        MonicPoly expect = from_roots(inside);
        for (int k = 0; k < loc.n; ++k)
            EXPECT_LE(std::abs(loc.poly.coeffs[k] - expect.coeffs[k]), alias * std::pow(1.0 + loc.r, k + 1));
    }
}

TEST(Property, ShrinkTerminates) {
    LocalizerOptions opt;
    opt.max_halvings = 5;
    // the foreign zero sits at distance 1e-3: five halvings from 1 cannot isolate it
    EXPECT_EQ(code_of([&] { select_radius(fn("(z - 1)*(z - 1.001)"), 0.0, 1.0, 1.0, opt); }),
              ErrorCode::NoRadiusFound);
    opt.max_halvings = 40;
    LocalFactorization loc = select_radius(fn("(z - 1)*(z - 1.001)"), 0.0, 1.0, 1.0, opt);
    EXPECT_LT(loc.r, 1e-3);
    EXPECT_GE(loc.r, std::ldexp(1.0, -40));
}
