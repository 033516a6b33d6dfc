#include <gtest/gtest.h>

#include <random>

#include "rootbranch/param_domain.hpp"

using namespace rootbranch;

namespace {

// l1 -- c -- l2, with c -- l3 hanging off the middle
ParamDomain ytree(double a = 1.0, double b = 1.0, double c = 1.0) {
    return ParamDomain::tree({{"l1", std::nullopt}, {"c", std::nullopt}, {"l2", std::nullopt}, {"l3", std::nullopt}},
                             {{0, 1, a}, {1, 2, b}, {1, 3, c}});
}

/// Random tree: vertex k > 0 attaches to a random earlier vertex.
ParamDomain random_tree(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> len(0.1, 2.0);
    std::vector<VertexSpec> vs;
    std::vector<TreeEdge> es;
    for (int k = 0; k < n; ++k) {
        vs.push_back({"v" + std::to_string(k), std::nullopt});
        if (k > 0) {
            std::uniform_int_distribution<int> parent(0, k - 1);
            es.push_back({static_cast<std::size_t>(parent(rng)), static_cast<std::size_t>(k), len(rng)});
        }
    }
    return ParamDomain::tree(vs, es);
}

DomainPoint random_point(std::mt19937_64& rng, const ParamDomain& d) {
    std::uniform_int_distribution<std::size_t> e(0, d.edges().size() - 1);
    std::uniform_real_distribution<double> t(0.0, 1.0);
    return d.on_edge(e(rng), t(rng));
}

double dist(const ParamDomain& d, const DomainPoint& a, const DomainPoint& b) {
    return path_between(d, a, b).length();
}

}  // namespace

TEST(Interval, Basics) {
    ParamDomain d = ParamDomain::interval();
    EXPECT_TRUE(d.is_interval());
    EXPECT_EQ(d.total_length(), 1.0);
    EXPECT_EQ(d.coordinate(d.at(0.3)), 0.3);
    EXPECT_EQ(d.at(0.0), d.vertex(0));
    EXPECT_EQ(d.at(1.0), d.vertex(1));
    EXPECT_THROW(d.at(1.5), Error);
    EXPECT_EQ(d.leaves(), (std::vector<std::size_t>{0, 1}));
}

TEST(Interval, PathAndAdvance) {
    ParamDomain d = ParamDomain::interval();
    PathSegment s = path_between(d, d.at(0.2), d.at(0.7));
    EXPECT_NEAR(s.length(), 0.5, 1e-15);
    EXPECT_EQ(advance(d, s, d.at(0.2), 0.1), d.at(0.2 + 0.1));
    EXPECT_EQ(advance(d, s, d.at(0.6), 0.5), d.at(0.7));
    PathSegment back = path_between(d, d.at(0.7), d.at(0.2));
    EXPECT_NEAR(d.coordinate(advance(d, back, d.at(0.7), 0.25)), 0.45, 1e-15);
    EXPECT_THROW(advance(d, s, d.at(0.2), 0.0), Error);
    EXPECT_THROW(advance(d, s, d.at(0.9), 0.1), Error);
}

TEST(Tree, CoordinatesDefaultToDistance) {
    ParamDomain d = ytree(1.0, 2.0, 0.5);
    EXPECT_EQ(d.coordinate(d.vertex(0)), 0.0);
    EXPECT_EQ(d.coordinate(d.vertex(1)), 1.0);
    EXPECT_EQ(d.coordinate(d.vertex(2)), 3.0);
    EXPECT_EQ(d.coordinate(d.vertex(3)), 1.5);
    EXPECT_EQ(d.coordinate(d.on_edge(1, 0.25)), 1.5);
    EXPECT_EQ(d.total_length(), 3.5);
    EXPECT_EQ(d.leaves(), (std::vector<std::size_t>{0, 2, 3}));
}

TEST(Tree, AdvanceCrossesJunction) {
    ParamDomain d = ytree();
    PathSegment s = path_between(d, d.vertex(0), d.vertex(2));
    EXPECT_EQ(s.length(), 2.0);
    DomainPoint p = d.on_edge(0, 0.9);
    DomainPoint q = advance(d, s, p, 0.2);
    EXPECT_EQ(q.kind, DomainPoint::Kind::Edge);
    EXPECT_EQ(q.id, 1u);
    EXPECT_NEAR(q.t, 0.1, 1e-12);
}

TEST(Tree, PathThroughEdgeInteriors) {
    ParamDomain d = ytree();
    PathSegment s = path_between(d, d.on_edge(1, 0.5), d.on_edge(2, 0.25));
    EXPECT_NEAR(s.length(), 0.75, 1e-15);
    ASSERT_EQ(s.pieces.size(), 2u);
    EXPECT_EQ(s.pieces[0].t_to, 0.0);
    EXPECT_EQ(s.pieces[1].t_from, 0.0);
    PathSegment same = path_between(d, d.on_edge(1, 0.2), d.on_edge(1, 0.6));
    EXPECT_NEAR(same.length(), 0.4, 1e-15);
    EXPECT_TRUE(path_between(d, d.vertex(1), d.vertex(1)).empty());
}

TEST(Tree, ValidationErrors) {
    auto bad = [](std::vector<VertexSpec> v, std::vector<TreeEdge> e) {
        try {
            ParamDomain::tree(v, e);
        } catch (const Error& err) {
            return err.code() == ErrorCode::ValidationError;
        }
        return false;
    };
    // a cycle on three vertices plus a detached fourth
    EXPECT_TRUE(bad({{"a", {}}, {"b", {}}, {"c", {}}, {"d", {}}}, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}));
    EXPECT_TRUE(bad({{"a", {}}, {"b", {}}, {"c", {}}}, {{0, 1, 1}}));
    EXPECT_TRUE(bad({{"a", {}}, {"a", {}}}, {{0, 1, 1}}));
    EXPECT_TRUE(bad({{"a", {}}, {"b", {}}}, {{0, 1, 0}}));
    EXPECT_TRUE(bad({{"a", {}}, {"b", {}}}, {{0, 0, 1}}));
    EXPECT_TRUE(bad({{"a", {}}, {"b", {}}}, {{0, 5, 1}}));
    EXPECT_TRUE(bad({}, {}));
}

TEST(Tree, SweepTargets) {
    ParamDomain d = ytree();
    std::vector<SweepTarget> ts = sweep_targets(d, d.vertex(0));
    ASSERT_EQ(ts.size(), 2u);
    EXPECT_EQ(ts[0].path.end, d.vertex(2));
    EXPECT_EQ(ts[1].path.end, d.vertex(3));
    EXPECT_EQ(ts[1].prefix_owner, std::optional<std::size_t>(0));
    EXPECT_EQ(ts[1].shared_prefix, 1.0);

    std::vector<SweepTarget> mid = sweep_targets(d, d.vertex(1));
    EXPECT_EQ(mid.size(), 3u);
    for (const SweepTarget& t : mid) EXPECT_EQ(t.shared_prefix, 0.0);

    ParamDomain single = ParamDomain::tree({{"only", 0.5}}, {});
    EXPECT_TRUE(sweep_targets(single, single.vertex(0)).empty());
    EXPECT_EQ(single.total_length(), 0.0);
}

TEST(Property, PathReversal) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        ParamDomain d = random_tree(rng, 2 + trial % 9);
        DomainPoint a = random_point(rng, d), b = random_point(rng, d);
        PathSegment ab = path_between(d, a, b), ba = path_between(d, b, a);
        EXPECT_NEAR(ab.length(), ba.length(), 1e-12);
        ASSERT_EQ(ab.pieces.size(), ba.pieces.size());
        for (std::size_t k = 0; k < ab.pieces.size(); ++k) {
            const PathPiece& p = ab.pieces[k];
            const PathPiece& q = ba.pieces[ab.pieces.size() - 1 - k];
            EXPECT_EQ(p.edge, q.edge);
            EXPECT_EQ(p.t_from, q.t_to);
            EXPECT_EQ(p.t_to, q.t_from);
        }
    }
}

TEST(Property, ArcsAreUnique) {
    // unicoherence: a point on two of the three pairwise arcs lies on the third one too
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        ParamDomain d = random_tree(rng, 2 + trial % 9);
        DomainPoint a = random_point(rng, d), b = random_point(rng, d), c = random_point(rng, d);
        double ab = dist(d, a, b), bc = dist(d, b, c), ac = dist(d, a, c);
        EXPECT_LE(ac, ab + bc + 1e-12);
        // b is on E[a,c] iff the distances add up, and then the arc reports it
        PathSegment s = path_between(d, a, c);
        if (std::abs(ab + bc - ac) < 1e-12) {
            ASSERT_TRUE(arc_position(d, s, b).has_value());
            EXPECT_NEAR(*arc_position(d, s, b), ab, 1e-9);
        }
        for (double frac : {0.0, 0.3, 0.7, 1.0}) {
            DomainPoint m = position_at(d, s, frac * ac).point;
            EXPECT_NEAR(dist(d, a, m) + dist(d, m, c), ac, 1e-9);
        }
    }
}

TEST(Property, SweepCoversDomain) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        ParamDomain d = random_tree(rng, 2 + trial % 9);
        DomainPoint x0 = random_point(rng, d);
        std::vector<SweepTarget> ts = sweep_targets(d, x0);
        // every edge is traversed, and new arc length adds up to the total
        std::vector<double> covered(d.edges().size(), 0.0);
        double fresh = 0.0;
        for (const SweepTarget& t : ts) {
            fresh += t.path.length() - t.shared_prefix;
            for (std::size_t k = t.prefix_pieces; k < t.path.pieces.size(); ++k)
                covered[t.path.pieces[k].edge] += t.path.pieces[k].length;
        }
        EXPECT_NEAR(fresh, d.total_length(), 1e-9);
        for (std::size_t e = 0; e < covered.size(); ++e) EXPECT_NEAR(covered[e], d.edges()[e].length, 1e-9);
    }
}

TEST(Property, AdvanceIsAdditive) {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(0.01, 0.4);
    for (int trial = 0; trial < 200; ++trial) {
        ParamDomain d = random_tree(rng, 2 + trial % 9);
        DomainPoint a = random_point(rng, d), b = random_point(rng, d);
        PathSegment s = path_between(d, a, b);
        if (s.length() < 1e-6) continue;
        double h1 = u(rng) * s.length(), h2 = u(rng) * s.length();
        DomainPoint once = advance(d, s, a, h1 + h2);
        DomainPoint twice = advance(d, s, advance(d, s, a, h1), h2);
        EXPECT_NEAR(*arc_position(d, s, once), *arc_position(d, s, twice), 1e-9);
        EXPECT_NEAR(*arc_position(d, s, once), h1 + h2, 1e-9);
    }
}
