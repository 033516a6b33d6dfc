#pragma once

// Branch CSV and JSON summary output.

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "rootbranch/continuation.hpp"
#include "rootbranch/problem.hpp"

namespace rootbranch {

/// 17 significant digits: reading the text back recovers the double exactly.
inline std::string format_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const ParamDomain& d, const RootBranch& br) {
    out << "segment,arc,edge,t,re_w,im_w,residual\n";
    for (const BranchSample& s : br.samples) {
        out << s.segment << ',' << format_exact(s.arc) << ',';
        if (d.is_interval()) out << "-," << format_exact(s.x);
        else out << s.edge << ',' << format_exact(s.t);
        out << ',' << format_exact(s.w.real()) << ',' << format_exact(s.w.imag()) << ',' << format_exact(s.residual)
            << '\n';
    }
}

inline nlohmann::json point_json(const ParamDomain& d, const DomainPoint& p) {
    nlohmann::json j;
    j["x"] = d.coordinate(p);
    j["point"] = d.describe(p);
    return j;
}

inline nlohmann::json config_json(const EngineConfig& c) {
    nlohmann::json j;
    j["samples"] = c.samples;
    j["safety"] = c.safety;
    j["growth"] = c.growth;
    j["growth_after"] = c.growth_after;
    j["h0"] = c.h0 ? nlohmann::json(*c.h0) : nlohmann::json("segment length / 64");
    j["h_min"] = c.h_min;
    j["h_max_fraction"] = c.h_max_fraction;
    j["blowup_threshold"] = c.blowup_threshold;
    j["osc_tol"] = c.osc_tol;
    j["residual_tol"] = c.residual_tol;
    j["seed_tol"] = c.seed_tol;
    j["ambiguity_ratio"] = c.ambiguity_ratio;
    j["window"] = c.window;
    j["max_steps"] = c.max_steps;
    j["output_samples"] = c.output_samples;
    j["max_retries"] = c.max_retries;
    j["closure_gap"] = c.closure_gap;
    j["trend_min_abs"] = c.trend_min_abs;
    j["max_halvings"] = c.max_halvings;
    return j;
}

/// Run summary: status, location, diagnostics and the effective config.
inline nlohmann::json summary_json(const Problem& p, const RootBranch& br) {
    const Diagnostics& g = br.diagnostics;
    nlohmann::json j;
    j["problem"] = p.name;
    j["status"] = to_string(br.status);
    j["exit_code"] = exit_code(br.status);
    j["status_location"] = br.status_location ? point_json(p.domain, *br.status_location) : nlohmann::json(nullptr);
    j["seed"] = {{"x", p.domain.coordinate(p.x0)}, {"re", br.seed.real()}, {"im", br.seed.imag()}};
    j["function"] = p.spec.function ? to_string(*p.spec.function) : "series";
    j["samples"] = br.samples.size();

    nlohmann::json diag;
    diag["reason"] = g.reason;
    diag["stall"] = g.stall;
    diag["max_abs_w"] = g.max_abs_w;
    diag["window_diameter"] = g.window_diameter;
    diag["max_residual"] = g.max_residual;
    diag["pole_estimate"] = g.pole_estimate ? nlohmann::json(*g.pole_estimate) : nlohmann::json(nullptr);
    diag["steps_accepted"] = g.steps_accepted;
    diag["steps_rejected"] = g.steps_rejected;
    diag["ambiguous"] = g.ambiguous;
    diag["retries"] = g.retries;
    diag["certificate_checks"] = g.certificate_checks;
    diag["certificate_violations"] = g.certificate_violations;
    diag["certificate_inconclusive"] = g.certificate_inconclusive;
    nlohmann::json degenerate = nlohmann::json::array();
    for (const DegenerateEndpoint& e : g.degenerate_endpoints) {
        nlohmann::json d = point_json(p.domain, e.point);
        d["status"] = "DegenerateBarrier";
        d["constant"] = {{"re", e.constant.real()}, {"im", e.constant.imag()}};
        degenerate.push_back(d);
    }
    diag["degenerate_endpoints"] = degenerate;
    j["diagnostics"] = diag;

    nlohmann::json segs = nlohmann::json::array();
    for (const SegmentResult& s : br.segments) {
        nlohmann::json sj;
        sj["id"] = s.id;
        sj["from"] = point_json(p.domain, s.start);
        sj["to"] = point_json(p.domain, s.end);
        sj["ran"] = s.ran;
        sj["status"] = to_string(s.status);
        sj["location"] = s.location ? point_json(p.domain, *s.location) : nlohmann::json(nullptr);
        segs.push_back(sj);
    }
    j["segments"] = segs;
    j["config"] = config_json(p.cfg);
    return j;
}

}  // namespace rootbranch
