#pragma once

// Parameter spaces: the unit interval and finite metric trees.
//
// Both are stored as a tree whose edges are copies of [0,1] scaled to a
// declared length; the interval is the two-vertex, one-edge tree. Every vertex
// carries a real coordinate, and points on an edge interpolate the coordinates
// of its endpoints linearly. The coordinate is the `x` seen by F(x,z).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "rootbranch/error.hpp"

namespace rootbranch {

/// A point of a ParamDomain. Vertex points are canonical: an edge point with
/// t = 0 or t = 1 is always stored as the corresponding vertex.
struct DomainPoint {
    enum class Kind { Vertex, Edge };
    Kind kind = Kind::Vertex;
    std::size_t id = 0;  // vertex id or edge id
    double t = 0.0;      // local coordinate in (0,1) along the edge u -> v

    friend bool operator==(const DomainPoint&, const DomainPoint&) = default;
};

struct VertexSpec {
    std::string name;
    std::optional<double> coordinate;
};

struct TreeVertex {
    std::string name;
    double coordinate = 0.0;
};

struct TreeEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    double length = 1.0;

    friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

class ParamDomain {
public:
    enum class Kind { Interval, Tree };

    /// The unit interval [0,1]; x coincides with the local coordinate t.
    static ParamDomain interval() {
        ParamDomain d;
        d.kind_ = Kind::Interval;
        d.vertices_ = {{"0", 0.0}, {"1", 1.0}};
        d.edges_ = {{0, 1, 1.0}};
        d.build_adjacency();
        return d;
    }

    /// Finite metric tree. Vertices without a coordinate get their arc-length
    /// distance from vertex 0.
    static ParamDomain tree(const std::vector<VertexSpec>& vertices, std::vector<TreeEdge> edges) {
        if (vertices.empty()) throw Error(ErrorCode::ValidationError, "tree needs at least one vertex");
        if (edges.size() + 1 != vertices.size())
            throw Error(ErrorCode::ValidationError,
                        "tree must have exactly |vertices| - 1 edges (got " + std::to_string(edges.size()) +
                            " edges for " + std::to_string(vertices.size()) + " vertices)");
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (vertices[i].name.empty()) throw Error(ErrorCode::ValidationError, "empty vertex name");
            for (std::size_t j = 0; j < i; ++j)
                if (vertices[j].name == vertices[i].name)
                    throw Error(ErrorCode::ValidationError, "duplicate vertex name '" + vertices[i].name + "'");
            if (vertices[i].coordinate && !std::isfinite(*vertices[i].coordinate))
                throw Error(ErrorCode::ValidationError, "non-finite coordinate for vertex '" + vertices[i].name + "'");
        }
        for (const TreeEdge& e : edges) {
            if (e.u >= vertices.size() || e.v >= vertices.size())
                throw Error(ErrorCode::ValidationError, "edge references unknown vertex");
            if (e.u == e.v) throw Error(ErrorCode::ValidationError, "self-loop edge");
            if (!(e.length > 0.0) || !std::isfinite(e.length))
                throw Error(ErrorCode::ValidationError, "edge length must be positive and finite");
        }

        ParamDomain d;
        d.kind_ = Kind::Tree;
        d.edges_ = std::move(edges);
        d.vertices_.resize(vertices.size());
        for (std::size_t i = 0; i < vertices.size(); ++i) d.vertices_[i].name = vertices[i].name;
        d.build_adjacency();

        std::vector<double> dist = d.distances_from(0);
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (!std::isfinite(dist[i]))
                throw Error(ErrorCode::ValidationError, "tree is not connected (a cycle or a detached part)");
            d.vertices_[i].coordinate = vertices[i].coordinate.value_or(dist[i]);
        }
        return d;
    }

    Kind kind() const { return kind_; }
    bool is_interval() const { return kind_ == Kind::Interval; }
    const std::vector<TreeVertex>& vertices() const { return vertices_; }
    const std::vector<TreeEdge>& edges() const { return edges_; }

    std::optional<std::size_t> find_vertex(const std::string& name) const {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (vertices_[i].name == name) return i;
        return std::nullopt;
    }

    std::optional<std::size_t> find_edge(std::size_t a, std::size_t b) const {
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if ((edges_[i].u == a && edges_[i].v == b) || (edges_[i].u == b && edges_[i].v == a)) return i;
        return std::nullopt;
    }

    DomainPoint vertex(std::size_t v) const {
        if (v >= vertices_.size()) throw Error(ErrorCode::OutOfDomain, "vertex id out of range");
        return {DomainPoint::Kind::Vertex, v, 0.0};
    }

    DomainPoint on_edge(std::size_t e, double t) const {
        if (e >= edges_.size()) throw Error(ErrorCode::OutOfDomain, "edge id out of range");
        if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::OutOfDomain, "local coordinate outside [0,1]");
        if (t == 0.0) return vertex(edges_[e].u);
        if (t == 1.0) return vertex(edges_[e].v);
        return {DomainPoint::Kind::Edge, e, t};
    }

    /// Interval point with x = t.
    DomainPoint at(double t) const {
        if (!is_interval()) throw Error(ErrorCode::InvalidArgument, "at(t) is only defined on the interval");
        return on_edge(0, t);
    }

    bool contains(const DomainPoint& p) const {
        if (p.kind == DomainPoint::Kind::Vertex) return p.id < vertices_.size();
        return p.id < edges_.size() && p.t > 0.0 && p.t < 1.0;
    }

    /// The parameter coordinate x of a point.
    double coordinate(const DomainPoint& p) const {
        if (!contains(p)) throw Error(ErrorCode::OutOfDomain, "point is not in the domain");
        if (p.kind == DomainPoint::Kind::Vertex) return vertices_[p.id].coordinate;
        const TreeEdge& e = edges_[p.id];
        double xu = vertices_[e.u].coordinate;
        double xv = vertices_[e.v].coordinate;
        return xu + p.t * (xv - xu);
    }

    std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }

    /// Degree-one vertices in id order.
    std::vector<std::size_t> leaves() const {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < vertices_.size(); ++v)
            if (degree(v) == 1) out.push_back(v);
        return out;
    }

    double total_length() const {
        double s = 0.0;
        for (const TreeEdge& e : edges_) s += e.length;
        return s;
    }

    /// Neighbouring (vertex, edge) pairs.
    const std::vector<std::pair<std::size_t, std::size_t>>& neighbours(std::size_t v) const {
        return adjacency_.at(v);
    }

    std::string describe(const DomainPoint& p) const {
        if (is_interval()) return "x=" + std::to_string(coordinate(p));
        if (p.kind == DomainPoint::Kind::Vertex) return "vertex " + vertices_[p.id].name;
        const TreeEdge& e = edges_[p.id];
        return "edge " + vertices_[e.u].name + "-" + vertices_[e.v].name + " t=" + std::to_string(p.t);
    }

    friend bool operator==(const ParamDomain& a, const ParamDomain& b) {
        if (a.kind_ != b.kind_ || a.edges_ != b.edges_ || a.vertices_.size() != b.vertices_.size()) return false;
        for (std::size_t i = 0; i < a.vertices_.size(); ++i)
            if (a.vertices_[i].name != b.vertices_[i].name || a.vertices_[i].coordinate != b.vertices_[i].coordinate)
                return false;
        return true;
    }

    /// Shortest-path distances from a vertex; +inf where unreachable.
    std::vector<double> distances_from(std::size_t source) const {
        std::vector<double> dist(vertices_.size(), std::numeric_limits<double>::infinity());
        std::vector<std::size_t> parent_edge;
        shortest_paths(source, dist, parent_edge);
        return dist;
    }

    /// Distances and parent edges of the shortest-path tree rooted at `source`.
    void shortest_paths(std::size_t source, std::vector<double>& dist, std::vector<std::size_t>& parent_edge) const {
        constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
        dist.assign(vertices_.size(), std::numeric_limits<double>::infinity());
        parent_edge.assign(vertices_.size(), none);
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        dist[source] = 0.0;
        queue.push({0.0, source});
        while (!queue.empty()) {
            auto [d, v] = queue.top();
            queue.pop();
            if (d > dist[v]) continue;
            for (auto [w, e] : adjacency_[v]) {
                double nd = d + edges_[e].length;
                if (nd < dist[w]) {
                    dist[w] = nd;
                    parent_edge[w] = e;
                    queue.push({nd, w});
                }
            }
        }
    }

private:
    void build_adjacency() {
        adjacency_.assign(vertices_.size(), {});
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            adjacency_[edges_[i].u].push_back({edges_[i].v, i});
            adjacency_[edges_[i].v].push_back({edges_[i].u, i});
        }
    }

    Kind kind_ = Kind::Interval;
    std::vector<TreeVertex> vertices_;
    std::vector<TreeEdge> edges_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
};

/// One piece of an arc: the part of `edge` between local coordinates
/// t_from and t_to, traversed in that direction.
struct PathPiece {
    std::size_t edge = 0;
    double t_from = 0.0;
    double t_to = 0.0;
    double length = 0.0;

    friend bool operator==(const PathPiece&, const PathPiece&) = default;
};

/// Position on a path in both arc-length and edge-local terms.
struct PathPosition {
    DomainPoint point;
    std::size_t edge = 0;
    double t = 0.0;
};

/// The unique arc E[a,b] from a to b, ordered from a.
struct PathSegment {
    DomainPoint start;
    DomainPoint end;
    std::vector<PathPiece> pieces;
    std::vector<double> offsets;  // arc length at the start of each piece

    double length() const { return offsets.empty() ? 0.0 : offsets.back() + pieces.back().length; }
    bool empty() const { return pieces.empty(); }
};

namespace detail {

inline PathSegment assemble(DomainPoint a, DomainPoint b, std::vector<PathPiece> pieces) {
    PathSegment seg{a, b, std::move(pieces), {}};
    double acc = 0.0;
    for (const PathPiece& p : seg.pieces) {
        seg.offsets.push_back(acc);
        acc += p.length;
    }
    return seg;
}

struct Anchor {
    std::size_t vertex;
    std::optional<PathPiece> piece;  // from the point to the vertex
    double length;
};

inline std::vector<Anchor> anchors(const ParamDomain& d, const DomainPoint& p) {
    if (p.kind == DomainPoint::Kind::Vertex) return {{p.id, std::nullopt, 0.0}};
    const TreeEdge& e = d.edges()[p.id];
    double to_u = p.t * e.length;
    double to_v = (1.0 - p.t) * e.length;
    return {{e.u, PathPiece{p.id, p.t, 0.0, to_u}, to_u}, {e.v, PathPiece{p.id, p.t, 1.0, to_v}, to_v}};
}

}  // namespace detail

/// The unique arc between two points of a tree.
inline PathSegment path_between(const ParamDomain& d, const DomainPoint& a, const DomainPoint& b) {
    if (!d.contains(a) || !d.contains(b)) throw Error(ErrorCode::OutOfDomain, "path endpoint not in domain");
    if (a == b) return detail::assemble(a, b, {});

    if (a.kind == DomainPoint::Kind::Edge && b.kind == DomainPoint::Kind::Edge && a.id == b.id) {
        double len = std::abs(b.t - a.t) * d.edges()[a.id].length;
        return detail::assemble(a, b, {PathPiece{a.id, a.t, b.t, len}});
    }

    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    double best = std::numeric_limits<double>::infinity();
    std::vector<PathPiece> best_pieces;
    for (const detail::Anchor& from : detail::anchors(d, a)) {
        std::vector<double> dist;
        std::vector<std::size_t> parent;
        d.shortest_paths(from.vertex, dist, parent);
        for (const detail::Anchor& to : detail::anchors(d, b)) {
            double total = from.length + dist[to.vertex] + to.length;
            if (!(total < best)) continue;
            // walk back from the target vertex
            std::vector<PathPiece> middle;
            std::size_t v = to.vertex;
            while (v != from.vertex) {
                std::size_t e = parent[v];
                if (e == none) break;
                const TreeEdge& edge = d.edges()[e];
                bool forward = edge.v == v;  // traversed u -> v
                middle.push_back(PathPiece{e, forward ? 0.0 : 1.0, forward ? 1.0 : 0.0, edge.length});
                v = forward ? edge.u : edge.v;
            }
            std::reverse(middle.begin(), middle.end());
            std::vector<PathPiece> pieces;
            if (from.piece) pieces.push_back(*from.piece);
            pieces.insert(pieces.end(), middle.begin(), middle.end());
            if (to.piece) {
                // reverse the point->vertex piece so it runs vertex->point
                const PathPiece& tp = *to.piece;
                pieces.push_back(PathPiece{tp.edge, tp.t_to, tp.t_from, tp.length});
            }
            best = total;
            best_pieces = std::move(pieces);
        }
    }
    return detail::assemble(a, b, std::move(best_pieces));
}

/// Point and edge-local position at arc length s (clamped to the segment).
inline PathPosition position_at(const ParamDomain& d, const PathSegment& seg, double s) {
    if (seg.empty()) {
        const DomainPoint& p = seg.start;
        if (p.kind == DomainPoint::Kind::Edge) return {p, p.id, p.t};
        // report a vertex through any incident edge, or edge 0 for a single vertex
        for (std::size_t i = 0; i < d.edges().size(); ++i) {
            if (d.edges()[i].u == p.id) return {p, i, 0.0};
            if (d.edges()[i].v == p.id) return {p, i, 1.0};
        }
        return {p, 0, 0.0};
    }
    s = std::clamp(s, 0.0, seg.length());
    std::size_t i = seg.pieces.size() - 1;
    for (std::size_t k = 0; k < seg.pieces.size(); ++k) {
        if (s <= seg.offsets[k] + seg.pieces[k].length) {
            i = k;
            break;
        }
    }
    const PathPiece& piece = seg.pieces[i];
    double frac = piece.length > 0.0 ? std::clamp((s - seg.offsets[i]) / piece.length, 0.0, 1.0) : 1.0;
    double t = frac >= 1.0 ? piece.t_to : piece.t_from + (piece.t_to - piece.t_from) * frac;
    return {d.on_edge(piece.edge, t), piece.edge, t};
}

/// Arc length of p along seg, if p lies on it.
inline std::optional<double> arc_position(const ParamDomain& d, const PathSegment& seg, const DomainPoint& p) {
    if (p == seg.start) return 0.0;
    for (std::size_t k = 0; k < seg.pieces.size(); ++k) {
        const PathPiece& piece = seg.pieces[k];
        const TreeEdge& e = d.edges()[piece.edge];
        double t;
        if (p.kind == DomainPoint::Kind::Edge) {
            if (p.id != piece.edge) continue;
            t = p.t;
        } else if (p.id == e.u) {
            t = 0.0;
        } else if (p.id == e.v) {
            t = 1.0;
        } else {
            continue;
        }
        double lo = std::min(piece.t_from, piece.t_to);
        double hi = std::max(piece.t_from, piece.t_to);
        if (t < lo || t > hi) continue;
        return seg.offsets[k] + std::abs(t - piece.t_from) * e.length;
    }
    return std::nullopt;
}

/// The point at arc distance h beyond p toward the segment end, clamped to the end.
inline DomainPoint advance(const ParamDomain& d, const PathSegment& seg, const DomainPoint& p, double h) {
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "advance needs h > 0");
    std::optional<double> s = arc_position(d, seg, p);
    if (!s) throw Error(ErrorCode::OutOfDomain, "point is not on the segment");
    double target = *s + h;
    if (target >= seg.length()) return seg.end;
    return position_at(d, seg, target).point;
}

/// A sweep direction: the arc from the seed to one leaf. The first
/// `shared_prefix` arc length is already covered by target `prefix_owner`.
struct SweepTarget {
    PathSegment path;
    double shared_prefix = 0.0;
    std::size_t prefix_pieces = 0;
    std::optional<std::size_t> prefix_owner;
};

/// Arcs from x0 to every leaf, leaves in id order; together they cover d.
inline std::vector<SweepTarget> sweep_targets(const ParamDomain& d, const DomainPoint& x0) {
    if (!d.contains(x0)) throw Error(ErrorCode::OutOfDomain, "seed point not in domain");
    std::vector<SweepTarget> out;
    for (std::size_t leaf : d.leaves()) {
        DomainPoint target = d.vertex(leaf);
        if (target == x0) continue;
        SweepTarget st;
        st.path = path_between(d, x0, target);
        for (std::size_t j = 0; j < out.size(); ++j) {
            const auto& other = out[j].path.pieces;
            std::size_t k = 0;
            while (k < other.size() && k < st.path.pieces.size() && other[k] == st.path.pieces[k]) ++k;
            if (k > st.prefix_pieces) {
                st.prefix_pieces = k;
                st.prefix_owner = j;
            }
        }
        st.shared_prefix = st.prefix_pieces == 0 ? 0.0
                                                 : st.path.offsets[st.prefix_pieces - 1] +
                                                       st.path.pieces[st.prefix_pieces - 1].length;
        out.push_back(std::move(st));
    }
    return out;
}

}  // namespace rootbranch
