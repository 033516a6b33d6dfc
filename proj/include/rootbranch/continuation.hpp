#pragma once

// Root-branch continuation over an interval or a finite metric tree.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rootbranch/contour.hpp"
#include "rootbranch/error.hpp"
#include "rootbranch/function_model.hpp"
#include "rootbranch/monic_poly.hpp"
#include "rootbranch/param_domain.hpp"
#include "rootbranch/rouche.hpp"

namespace rootbranch {

struct EngineConfig {
    int samples = 128;                  // contour nodes
    double safety = 0.5;                // Rouché margin
    double growth = 1.5;
    int growth_after = 3;               // consecutive accepts before growing h
    std::optional<double> h0;           // default: segment length / 64
    double h_min = 1e-12;
    double h_max_fraction = 0.125;      // of the segment length
    double blowup_threshold = 1e8;
    double osc_tol = 1e-6;
    double residual_tol = 1e-8;
    double seed_tol = 1e-9;             // relative to 1 + |F| near the seed
    double ambiguity_ratio = 0.5;
    int window = 16;
    int max_steps = 20000;              // step attempts per segment
    int output_samples = 1000;          // grid points over the whole domain
    int max_retries = 3;
    double closure_gap = 1e-9;
    double trend_min_abs = 10.0;
    int max_halvings = 40;
    bool keep_step_log = false;         // fill Diagnostics::certified

    friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

enum class Status { Completed, AsymptoticBlowup, DegenerateBarrier, NonConvergent, SeedInvalid };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::Completed: return "Completed";
        case Status::AsymptoticBlowup: return "AsymptoticBlowup";
        case Status::DegenerateBarrier: return "DegenerateBarrier";
        case Status::NonConvergent: return "NonConvergent";
        case Status::SeedInvalid: return "SeedInvalid";
    }
    return "?";
}

struct BranchSample {
    int segment = 0;
    double arc = 0.0;  // arc length from the seed along the segment's sweep path
    DomainPoint point;
    std::size_t edge = 0;
    double t = 0.0;  // edge-local coordinate
    double x = 0.0;
    cplx w{};
    double residual = 0.0;
};

struct DegenerateEndpoint {
    DomainPoint point;
    double x = 0.0;
    cplx constant{};
};

/// A step that passed the Rouché test: F(x1,.) should have n zeros in circle.
struct CertifiedStep {
    double x0 = 0.0;
    double x1 = 0.0;
    Circle circle;
    int n = 0;
};

struct Diagnostics {
    double max_abs_w = 0.0;
    double window_diameter = 0.0;
    double max_residual = 0.0;
    std::optional<double> pole_estimate;  // arc position of an extrapolated pole
    std::string reason;
    std::string stall;  // what stopped the step loop, if anything
    std::vector<DegenerateEndpoint> degenerate_endpoints;
    long steps_accepted = 0;
    long steps_rejected = 0;
    long ambiguous = 0;
    long retries = 0;
    long certificate_checks = 0;       // zero recounts after accepted Rouché tests
    long certificate_violations = 0;   // recount differed from n
    long certificate_inconclusive = 0; // recount could not be evaluated
    std::vector<CertifiedStep> certified;
};

struct SegmentResult {
    int id = 0;
    DomainPoint start;
    DomainPoint end;
    Status status = Status::Completed;
    std::optional<DomainPoint> location;
    bool ran = false;
};

struct RootBranch {
    std::vector<BranchSample> samples;
    Status status = Status::Completed;
    std::optional<DomainPoint> status_location;
    Diagnostics diagnostics;
    std::vector<SegmentResult> segments;
    cplx seed{};
};

struct MatchResult {
    bool matched = false;
    cplx value{};
};

/// Nearest candidate to w_prev if it is clearly nearer than the runner-up;
/// a cluster of coincident candidates matches as one value.
inline MatchResult match_root(const std::vector<cplx>& candidates, cplx w_prev, double ratio = 0.5,
                              double coincide_tol = 1e-6) {
    if (candidates.empty()) throw Error(ErrorCode::InvalidArgument, "match_root needs candidates");
    double scale = 0.0;
    for (cplx c : candidates) scale = std::max(scale, std::abs(c));
    double spread = 0.0;
    for (cplx c : candidates) spread = std::max(spread, std::abs(c - candidates.front()));
    if (spread <= coincide_tol * (1.0 + scale)) {
        cplx nearest = candidates.front();
        for (cplx c : candidates)
            if (std::abs(c - w_prev) < std::abs(nearest - w_prev)) nearest = c;
        return {true, nearest};
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        double di = std::abs(candidates[i] - w_prev), db = std::abs(candidates[best] - w_prev);
        if (di < db || (di == db && lex_less(candidates[best], candidates[i]))) best = i;
    }
    double d1 = std::abs(candidates[best] - w_prev);
    double d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (i != best) d2 = std::min(d2, std::abs(candidates[i] - w_prev));
    if (d1 <= ratio * d2) return {true, candidates[best]};
    return {false, {}};
}

/// Deterministic choice when leaving a multiple zero: the lexicographically
/// greatest candidate, compared after rounding to `quantum`.
inline cplx select_departure(const std::vector<cplx>& candidates, double quantum) {
    if (candidates.empty()) throw Error(ErrorCode::InvalidArgument, "no candidates");
    auto key = [quantum](cplx c) {
        return std::pair{std::llround(c.real() / quantum), std::llround(c.imag() / quantum)};
    };
    cplx best = candidates.front();
    for (cplx c : candidates)
        if (key(best) < key(c)) best = c;
    return best;
}

struct WindowSample {
    double arc = 0.0;
    double x = 0.0;
    DomainPoint point;
    cplx w{};
    double residual = 0.0;
};

inline double window_diameter(const std::deque<WindowSample>& win) {
    double d = 0.0;
    for (std::size_t i = 0; i < win.size(); ++i)
        for (std::size_t j = i + 1; j < win.size(); ++j) d = std::max(d, std::abs(win[i].w - win[j].w));
    return d;
}

/// Linear fit of 1/w against arc position; returns the arc position where the
/// fit vanishes when the trend is a clean approach to a pole ahead.
inline std::optional<double> pole_ahead(const std::deque<WindowSample>& win, double min_abs) {
    if (win.size() < 4 || std::abs(win.back().w) < min_abs) return std::nullopt;
    const double n = static_cast<double>(win.size());
    double sbar = 0.0;
    cplx zbar{};
    for (const auto& s : win) {
        sbar += s.arc;
        zbar += 1.0 / s.w;
    }
    sbar /= n;
    zbar /= n;
    double sxx = 0.0;
    cplx sxz{};
    for (const auto& s : win) {
        sxx += (s.arc - sbar) * (s.arc - sbar);
        sxz += (s.arc - sbar) * (1.0 / s.w - zbar);
    }
    if (!(sxx > 0.0)) return std::nullopt;
    cplx beta = sxz / sxx;
    cplx alpha = zbar - beta * sbar;
    if (beta == cplx{0.0, 0.0}) return std::nullopt;
    double fit_err = 0.0;
    for (const auto& s : win) fit_err = std::max(fit_err, std::abs(1.0 / s.w - (alpha + beta * s.arc)));
    cplx root = -alpha / beta;
    double s_star = root.real();
    const double s_last = win.back().arc;
    const double span = s_last - win.front().arc;
    const double zeta_last = std::abs(1.0 / win.back().w);
    if (!(s_star >= s_last)) return std::nullopt;
    if (s_star - s_last > 4.0 * span) return std::nullopt;
    if (std::abs(alpha + beta * s_star) > 0.1 * zeta_last) return std::nullopt;
    if (fit_err > 0.05 * zeta_last) return std::nullopt;
    return s_star;
}

enum class Verdict { Blowup, Closed, Degenerate, Oscillating, Converged };

struct Classification {
    Verdict verdict = Verdict::Converged;
    Status status = Status::NonConvergent;
    DomainPoint location;
    double diameter = 0.0;
    double max_abs_w = 0.0;
    std::optional<double> pole_arc;
};

/// Failure taxonomy at a stall: an infinite limit, closure at the segment
/// end, a degenerate point, oscillation, or a converged window (retry).
/// `trend` is a longer-spaced history for the pole fit; defaults to `window`.
inline Classification classify_termination(const EntireFunction& f, const ParamDomain& d, const PathSegment& seg,
                                           const std::deque<WindowSample>& window, const DomainPoint& x_limit,
                                           const EngineConfig& cfg,
                                           const std::deque<WindowSample>* trend = nullptr) {
    Classification c;
    c.location = x_limit;
    c.diameter = window_diameter(window);
    for (const auto& s : window) c.max_abs_w = std::max(c.max_abs_w, std::abs(s.w));
    if (c.max_abs_w > cfg.blowup_threshold) {
        c.verdict = Verdict::Blowup;
        c.status = Status::AsymptoticBlowup;
        return c;
    }
    std::optional<double> limit_arc;
    if (!seg.empty()) limit_arc = arc_position(d, seg, x_limit);
    if (limit_arc && !window.empty()) {
        if (auto s_star = pole_ahead(trend ? *trend : window, cfg.trend_min_abs)) {
            double s_end = std::min(*s_star, seg.length());
            c.verdict = Verdict::Blowup;
            c.status = Status::AsymptoticBlowup;
            c.pole_arc = *s_star;
            c.location = position_at(d, seg, s_end).point;
            if (s_end >= seg.length()) c.location = seg.end;
            return c;
        }
        if (c.diameter <= cfg.osc_tol && seg.length() - *limit_arc <= cfg.closure_gap) {
            double xe = d.coordinate(seg.end);
            cplx w = window.back().w;
            cplx v = f.raw(xe, w);
            if (detail::finite(v) && std::abs(v) <= cfg.residual_tol) {
                c.verdict = Verdict::Closed;
                c.status = Status::Completed;
                c.location = seg.end;
                return c;
            }
        }
    }
    if (degeneracy_probe(f, d.coordinate(x_limit)).degenerate) {
        c.verdict = Verdict::Degenerate;
        c.status = Status::DegenerateBarrier;
        return c;
    }
    if (c.diameter > cfg.osc_tol) {
        c.verdict = Verdict::Oscillating;
        c.status = Status::NonConvergent;
        return c;
    }
    c.verdict = Verdict::Converged;
    c.status = Status::NonConvergent;
    return c;
}

/// Radius cap for localizing around w.
inline double r_max_for(cplx w) { return 0.5 * std::max(1.0, std::abs(w)); }

namespace detail {

struct SegmentRun {
    Status status = Status::Completed;
    std::optional<DomainPoint> location;
};

class SegmentTracker {
public:
    SegmentTracker(const EntireFunction& f, const ParamDomain& d, const PathSegment& seg, const EngineConfig& cfg,
                   int id, double arc_offset, Diagnostics& diag, std::vector<BranchSample>& out,
                   std::map<std::size_t, cplx>& junctions)
        : f_(f), d_(d), seg_(seg), cfg_(cfg), id_(id), arc_offset_(arc_offset), diag_(diag), out_(out),
          junctions_(junctions) {
        opt_.samples = cfg.samples;
        opt_.max_halvings = cfg.max_halvings;
        opt_.check_degeneracy = false;
        L_ = seg.length();
        grid_ = d.total_length() / std::max(1, cfg.output_samples);
        h0_ = cfg.h0 ? *cfg.h0 : L_ / 64.0;
        h_max_ = L_ * cfg.h_max_fraction;
    }

    SegmentRun run(cplx w_start) {
        s_ = 0.0;
        p_ = seg_.start;
        x_ = d_.coordinate(p_);
        w_ = w_start;
        push_window(std::abs(f_.raw(x_, w_)));
        if (L_ <= 0.0) return {};

        int retries = 0;
        for (;;) {
            SegmentRun done;
            if (advance_until_stall(done)) return done;
            DomainPoint limit = p_;
            std::deque<WindowSample> trend = trend_;
            if (trend.empty() || trend.back().arc < window_.back().arc) trend.push_back(window_.back());
            while (static_cast<int>(trend.size()) > cfg_.window) trend.pop_front();
            Classification c = classify_termination(f_, d_, seg_, window_, limit, cfg_, &trend);
            diag_.window_diameter = c.diameter;
            diag_.stall = stall_reason_;
            if (c.pole_arc) diag_.pole_estimate = arc_offset_ + *c.pole_arc;
            switch (c.verdict) {
                case Verdict::Closed: {
                    double xe = d_.coordinate(seg_.end);
                    s_ = L_;
                    p_ = seg_.end;
                    x_ = xe;
                    record(std::abs(f_.raw(xe, w_)), true);
                    return {};
                }
                case Verdict::Converged:
                    if (retries < cfg_.max_retries) {
                        ++retries;
                        ++diag_.retries;
                        continue;
                    }
                    diag_.reason = "step size collapsed with a converged window";
                    return {Status::NonConvergent, c.location};
                case Verdict::Blowup:
                    diag_.reason = diag_.pole_estimate ? "1/w extrapolates to zero ahead" : "|w| exceeded threshold";
                    return {Status::AsymptoticBlowup, c.location};
                case Verdict::Degenerate:
                    diag_.reason = "F is degenerate at the stall point";
                    return {Status::DegenerateBarrier, c.location};
                case Verdict::Oscillating:
                    diag_.reason = "window of w values does not settle";
                    return {Status::NonConvergent, c.location};
            }
        }
    }

private:
    // Returns true when the segment is finished (done is set); false on a stall.
    bool advance_until_stall(SegmentRun& done) {
        double h = h0_;
        int streak = 0;
        std::optional<LocalFactorization> loc;
        if (!(loc = localize(r_max_for(w_)))) return false;

        while (s_ < L_) {
            if (attempts_ >= cfg_.max_steps) {
                stall_reason_ = "step budget exhausted";
                return false;
            }
            if (h < cfg_.h_min) {
                stall_reason_ = "step size below h_min";
                return false;
            }
            if (streak_rejected_ >= kShrinkAfter) {
                // a neighbouring zero near the circle keeps m small; try a tighter disk
                streak_rejected_ = 0;
                if (!(loc = localize(0.5 * loc->r))) return false;
            }
            ++attempts_;
            double s1 = std::min({s_ + h, next_grid(), next_vertex(), L_});
            PathPosition pos = position_at(d_, seg_, s1);
            DomainPoint p1 = s1 >= L_ ? seg_.end : pos.point;
            double x1 = d_.coordinate(p1);

            auto reject = [&](double factor) {
                h = std::max((s1 - s_) * factor, 0.0);
                streak = 0;
                ++streak_rejected_;
                ++diag_.steps_rejected;
            };

            StepCheck chk = validate_step(f_, *loc, x1, cfg_.safety);
            if (!chk.accepted) {
                reject(0.5);
                continue;
            }

            ++diag_.certificate_checks;
            if (cfg_.keep_step_log) diag_.certified.push_back({x_, x1, loc->circle(), loc->n});
            ContourCount cc;
            try {
                cc = count_zeros_detailed(f_, x1, loc->circle());
            } catch (const Error&) {
                ++diag_.certificate_inconclusive;
                reject(0.5);
                continue;
            }
            if (cc.n != loc->n) {
                ++diag_.certificate_violations;
                reject(0.5);
                continue;
            }

            cplx chosen;
            try {
                LocalPoly factor = local_factor(cc.samples, cc.n);
                std::vector<cplx> roots = factor.roots();
                if (loc->n > 1) {
                    chosen = select_departure(roots, 1e-6 * loc->r);
                } else {
                    MatchResult mr = match_root(roots, w_, cfg_.ambiguity_ratio);
                    if (!mr.matched) {
                        ++diag_.ambiguous;
                        reject(0.5);
                        continue;
                    }
                    chosen = mr.value;
                }
            } catch (const Error&) {
                reject(0.5);
                continue;
            }

            Polished pol;
            try {
                pol = newton_polish(f_, x1, chosen);
            } catch (const Error&) {
                reject(0.5);
                continue;
            }
            if (!(pol.residual <= cfg_.residual_tol) || !(std::abs(pol.z - loc->z0) < loc->r)) {
                reject(0.5);
                continue;
            }

            // accept
            ++diag_.steps_accepted;
            streak_rejected_ = 0;
            const double r_prev = loc->r;
            s_ = s1;
            p_ = p1;
            x_ = x1;
            w_ = pol.z;
            push_window(pol.residual);
            if (++streak >= cfg_.growth_after) {
                h = std::min(h * cfg_.growth, h_max_);
                streak = 0;
            }
            if (std::abs(w_) > cfg_.blowup_threshold) {
                diag_.reason = "|w| exceeded threshold";
                done = {Status::AsymptoticBlowup, p_};
                return true;
            }
            if (s_ >= L_) break;
            if (!(loc = localize(std::min(r_max_for(w_), 4.0 * r_prev)))) return false;
        }
        done = {};
        return true;
    }

    std::optional<LocalFactorization> localize(double r_max) {
        try {
            return select_radius(f_, x_, w_, r_max, opt_);
        } catch (const Error& e) {
            stall_reason_ = e.what();
            return std::nullopt;
        }
    }

    double next_grid() const {
        double k = std::floor((arc_offset_ + s_) / grid_ + 1e-12) + 1.0;
        double g = k * grid_ - arc_offset_;
        return g > s_ ? g : s_ + grid_;
    }

    double next_vertex() const {
        for (std::size_t k = 0; k < seg_.pieces.size(); ++k) {
            double b = seg_.offsets[k] + seg_.pieces[k].length;
            if (b > s_) return b;
        }
        return L_;
    }

    bool on_grid(double s) const {
        double q = (arc_offset_ + s) / grid_;
        return std::abs(q - std::round(q)) <= 1e-12 * std::max(1.0, q);
    }

    void push_window(double residual) {
        window_.push_back({s_, x_, p_, w_, residual});
        while (static_cast<int>(window_.size()) > cfg_.window) window_.pop_front();
        diag_.max_abs_w = std::max(diag_.max_abs_w, std::abs(w_));
        if (s_ > 0.0) record(residual, s_ >= L_ || on_grid(s_) || p_.kind == DomainPoint::Kind::Vertex);
    }

    void record(double residual, bool emit) {
        if (p_.kind == DomainPoint::Kind::Vertex) {
            if (junctions_.count(p_.id)) return;  // written once
            junctions_[p_.id] = w_;
        }
        if (!emit) return;
        trend_.push_back({s_, x_, p_, w_, residual});
        while (static_cast<int>(trend_.size()) > cfg_.window) trend_.pop_front();
        BranchSample b;
        b.segment = id_;
        b.arc = arc_offset_ + s_;
        b.point = p_;
        PathPosition pos = position_at(d_, seg_, s_);
        b.edge = pos.edge;
        b.t = pos.t;
        b.x = x_;
        b.w = w_;
        b.residual = residual;
        diag_.max_residual = std::max(diag_.max_residual, residual);
        out_.push_back(b);
    }

    const EntireFunction& f_;
    const ParamDomain& d_;
    const PathSegment& seg_;
    const EngineConfig& cfg_;
    int id_;
    double arc_offset_;
    Diagnostics& diag_;
    std::vector<BranchSample>& out_;
    std::map<std::size_t, cplx>& junctions_;
    LocalizerOptions opt_;

    double L_ = 0.0, grid_ = 0.0, h0_ = 0.0, h_max_ = 0.0;
    double s_ = 0.0, x_ = 0.0;
    DomainPoint p_;
    cplx w_{};
    long attempts_ = 0;
    int streak_rejected_ = 0;
    static constexpr int kShrinkAfter = 4;
    std::deque<WindowSample> window_;
    std::deque<WindowSample> trend_;  // emitted samples only
    std::string stall_reason_;
};

}  // namespace detail

/// Tracks one branch along a single path from w_start; samples are appended
/// to `out` (the start point itself is not emitted).
inline SegmentResult extend_segment(const EntireFunction& f, const ParamDomain& d, const PathSegment& seg,
                                    cplx w_start, const EngineConfig& cfg, Diagnostics& diag,
                                    std::vector<BranchSample>& out, std::map<std::size_t, cplx>& junctions,
                                    int id = 0, double arc_offset = 0.0) {
    detail::SegmentTracker tracker(f, d, seg, cfg, id, arc_offset, diag, out, junctions);
    detail::SegmentRun r = tracker.run(w_start);
    SegmentResult res;
    res.id = id;
    res.start = seg.start;
    res.end = seg.end;
    res.status = r.status;
    res.location = r.location;
    res.ran = true;
    return res;
}

namespace detail {

inline BranchSample seed_sample(const ParamDomain& d, const DomainPoint& x0, cplx w, double residual) {
    BranchSample b;
    b.point = x0;
    b.x = d.coordinate(x0);
    b.w = w;
    b.residual = residual;
    PathSegment here = path_between(d, x0, x0);
    PathPosition pos = position_at(d, here, 0.0);
    b.edge = pos.edge;
    b.t = pos.t;
    return b;
}

}  // namespace detail

/// Grows the branch through (x0, z0) over the whole domain, one sweep path
/// per leaf; shared prefixes are tracked once.
inline RootBranch continue_branch(const EntireFunction& f, const ParamDomain& d, const DomainPoint& x0, cplx z0,
                                  const EngineConfig& cfg = {}) {
    if (!d.contains(x0)) throw Error(ErrorCode::OutOfDomain, "seed point not in domain");
    RootBranch br;
    const double x = d.coordinate(x0);

    double scale = 0.0;
    for (int j = 0; j < 8; ++j) {
        cplx v = f.raw(x, z0 + std::polar(1.0, 2.0 * std::numbers::pi * j / 8));
        if (detail::finite(v)) scale = std::max(scale, std::abs(v));
    }
    Polished seed{z0, std::numeric_limits<double>::infinity(), 0};
    if (detail::finite(z0)) {
        try {
            seed = newton_polish(f, x, z0, 2);
        } catch (const Error&) {
        }
    }
    br.seed = seed.z;
    if (!(seed.residual <= cfg.seed_tol * (1.0 + scale))) {
        br.status = Status::SeedInvalid;
        br.status_location = x0;
        br.diagnostics.reason = "seed is not a zero of F(x0,.)";
        return br;
    }

    std::map<std::size_t, cplx> junctions;
    br.samples.push_back(detail::seed_sample(d, x0, seed.z, seed.residual));
    br.diagnostics.max_abs_w = std::abs(seed.z);
    br.diagnostics.max_residual = seed.residual;
    if (x0.kind == DomainPoint::Kind::Vertex) junctions[x0.id] = seed.z;

    if (DegeneracyReport rep = degeneracy_probe(f, x); rep.degenerate) {
        br.status = Status::DegenerateBarrier;
        br.status_location = x0;
        br.diagnostics.degenerate_endpoints.push_back({x0, x, rep.constant});
        br.diagnostics.reason = "F is degenerate at the seed";
        return br;
    }

    std::vector<SweepTarget> targets = sweep_targets(d, x0);
    std::vector<std::optional<DomainPoint>> probed;
    auto note_endpoint = [&](const DomainPoint& p) {
        for (const auto& q : probed)
            if (q && *q == p) return;
        probed.push_back(p);
        double xe = d.coordinate(p);
        if (DegeneracyReport rep = degeneracy_probe(f, xe); rep.degenerate)
            br.diagnostics.degenerate_endpoints.push_back({p, xe, rep.constant});
    };

    for (std::size_t i = 0; i < targets.size(); ++i) {
        const SweepTarget& st = targets[i];
        SegmentResult res;
        res.id = static_cast<int>(i);
        PathSegment path;
        cplx w_start = seed.z;
        if (st.prefix_pieces > 0) {
            DomainPoint junction = position_at(d, st.path, st.shared_prefix).point;
            res.start = junction;
            res.end = st.path.end;
            auto it = junction.kind == DomainPoint::Kind::Vertex ? junctions.find(junction.id) : junctions.end();
            if (it == junctions.end()) {
                res.ran = false;
                res.status = Status::NonConvergent;
                br.segments.push_back(res);
                continue;  // owner failed before the junction
            }
            w_start = it->second;
            path = path_between(d, junction, st.path.end);
        } else {
            path = st.path;
        }
        note_endpoint(path.start);
        note_endpoint(path.end);
        res = extend_segment(f, d, path, w_start, cfg, br.diagnostics, br.samples, junctions, static_cast<int>(i),
                             st.shared_prefix);
        br.segments.push_back(res);
    }

    br.status = Status::Completed;
    for (const SegmentResult& s : br.segments) {
        if (s.ran && s.status != Status::Completed) {
            br.status = s.status;
            br.status_location = s.location;
            break;
        }
    }
    return br;
}

}  // namespace rootbranch
