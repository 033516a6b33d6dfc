#pragma once

// Problem files: line-based `key = value` text with `#` comments.
//
//   function = <expr in x, z>          exactly one of function / series / fixture
//   series   = a0; a1; ...; aN         coefficient expressions in x
//   fixture  = <name>                  built-in problem; only config lines may follow
//   domain   = interval | tree
//   vertex   = <name> [coordinate]     tree only, one line per vertex
//   edge     = <u> <v> <length>        tree only
//   seed     = <point>; <z>            point: x (interval), vertex name, or `u v t`
//   config.<name> = <number>           engine overrides

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rootbranch/continuation.hpp"
#include "rootbranch/error.hpp"
#include "rootbranch/expression.hpp"
#include "rootbranch/function_model.hpp"
#include "rootbranch/param_domain.hpp"
#include "rootbranch/parser.hpp"

namespace rootbranch {

struct SeedSpec {
    DomainPoint point;
    cplx z{};

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

struct ProblemSpec {
    std::optional<std::string> fixture;
    std::optional<Expr> function;
    std::optional<std::vector<Expr>> series;
    std::optional<ParamDomain> domain;
    std::optional<SeedSpec> seed;
    std::vector<std::pair<std::string, double>> overrides;
};

inline bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
    auto same_expr = [](const std::optional<Expr>& p, const std::optional<Expr>& q) {
        return p.has_value() == q.has_value() && (!p || to_string(*p) == to_string(*q));
    };
    if (a.fixture != b.fixture || !same_expr(a.function, b.function)) return false;
    if (a.series.has_value() != b.series.has_value()) return false;
    if (a.series) {
        if (a.series->size() != b.series->size()) return false;
        for (std::size_t i = 0; i < a.series->size(); ++i)
            if (to_string((*a.series)[i]) != to_string((*b.series)[i])) return false;
    }
    return a.domain == b.domain && a.seed == b.seed && a.overrides == b.overrides;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

inline std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

struct ConfigField {
    const char* name;
    bool integral;
    double EngineConfig::*real = nullptr;
    int EngineConfig::*whole = nullptr;
};

inline const std::vector<ConfigField>& config_fields() {
    static const std::vector<ConfigField> fields{
        {"ambiguity_ratio", false, &EngineConfig::ambiguity_ratio, nullptr},
        {"blowup_threshold", false, &EngineConfig::blowup_threshold, nullptr},
        {"closure_gap", false, &EngineConfig::closure_gap, nullptr},
        {"growth", false, &EngineConfig::growth, nullptr},
        {"growth_after", true, nullptr, &EngineConfig::growth_after},
        {"h0", false, nullptr, nullptr},
        {"h_max_fraction", false, &EngineConfig::h_max_fraction, nullptr},
        {"h_min", false, &EngineConfig::h_min, nullptr},
        {"max_halvings", true, nullptr, &EngineConfig::max_halvings},
        {"max_retries", true, nullptr, &EngineConfig::max_retries},
        {"max_steps", true, nullptr, &EngineConfig::max_steps},
        {"osc_tol", false, &EngineConfig::osc_tol, nullptr},
        {"output_samples", true, nullptr, &EngineConfig::output_samples},
        {"residual_tol", false, &EngineConfig::residual_tol, nullptr},
        {"safety", false, &EngineConfig::safety, nullptr},
        {"samples", true, nullptr, &EngineConfig::samples},
        {"seed_tol", false, &EngineConfig::seed_tol, nullptr},
        {"trend_min_abs", false, &EngineConfig::trend_min_abs, nullptr},
        {"window", true, nullptr, &EngineConfig::window},
    };
    return fields;
}

inline const ConfigField* find_config_field(std::string_view name) {
    for (const ConfigField& f : config_fields())
        if (name == f.name) return &f;
    return nullptr;
}

}  // namespace detail

/// Sets one named engine parameter; throws ValidationError on a bad name or value.
inline void apply_override(EngineConfig& cfg, const std::string& name, double value) {
    const detail::ConfigField* field = detail::find_config_field(name);
    if (!field) throw Error(ErrorCode::ValidationError, "unknown config key '" + name + "'");
    if (!std::isfinite(value)) throw Error(ErrorCode::ValidationError, "config." + name + " must be finite");
    if (field->integral) {
        if (value != std::floor(value) || value < 1.0 || value > 1e9)
            throw Error(ErrorCode::ValidationError, "config." + name + " must be a positive integer");
        int v = static_cast<int>(value);
        if (name == "samples" && (v < 16 || (v & (v - 1)) != 0))
            throw Error(ErrorCode::ValidationError, "config.samples must be a power of two >= 16");
        if (name == "window" && v < 2) throw Error(ErrorCode::ValidationError, "config.window must be >= 2");
        cfg.*(field->whole) = v;
        return;
    }
    if (name == "safety" && !(value > 0.0 && value < 1.0))
        throw Error(ErrorCode::ValidationError, "config.safety must lie in (0,1)");
    if (name == "growth" && !(value >= 1.0)) throw Error(ErrorCode::ValidationError, "config.growth must be >= 1");
    if (!(value > 0.0)) throw Error(ErrorCode::ValidationError, "config." + name + " must be positive");
    if (name == "h0") {
        cfg.h0 = value;
        return;
    }
    cfg.*(field->real) = value;
}

namespace detail {

struct Line {
    int number = 0;
    std::string key;
    std::string value;
    int value_column = 1;  // 1-based column of value's first character
};

inline std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> out;
    int number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(start, end - start);
        ++number;
        start = end + 1;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (trim(raw).empty()) {
            if (end == text.size()) break;
            continue;
        }
        std::size_t eq = raw.find('=');
        if (eq == std::string_view::npos)
            throw SyntaxError(static_cast<std::size_t>(number), raw.find_first_not_of(" \t") + 1,
                              "expected 'key = value'");
        std::string_view key = trim(raw.substr(0, eq));
        std::string_view rest = raw.substr(eq + 1);
        std::size_t lead = 0;
        while (lead < rest.size() && std::isspace(static_cast<unsigned char>(rest[lead]))) ++lead;
        Line l;
        l.number = number;
        l.key = std::string(key);
        l.value = std::string(trim(rest));
        l.value_column = static_cast<int>(eq + 1 + lead) + 1;
        if (l.key.empty()) throw SyntaxError(static_cast<std::size_t>(number), 1, "missing key");
        out.push_back(std::move(l));
        if (end == text.size()) break;
    }
    return out;
}

[[noreturn]] inline void value_error(const Line& l, const std::string& what) {
    throw SyntaxError(static_cast<std::size_t>(l.number), static_cast<std::size_t>(l.value_column), what);
}

inline Expr parse_value_expr(const Line& l, std::string_view text, int offset) {
    return parse_expression(text, l.number, l.value_column - 1 + offset);
}

inline void require_once(bool seen, const Line& l) {
    if (seen) throw Error(ErrorCode::ValidationError, "line " + std::to_string(l.number) + ": duplicate '" + l.key + "'");
}

/// Splits on ';' at parenthesis depth zero, remembering each part's offset.
inline std::vector<std::pair<std::string, int>> split_top_level(const std::string& s) {
    std::vector<std::pair<std::string, int>> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || (s[i] == ';' && depth == 0)) {
            out.emplace_back(s.substr(start, i - start), static_cast<int>(start));
            start = i + 1;
        } else if (s[i] == '(') {
            ++depth;
        } else if (s[i] == ')') {
            --depth;
        }
    }
    return out;
}

inline SeedSpec parse_seed(const Line& l, const ParamDomain& d) {
    auto parts = split_top_level(l.value);
    if (parts.size() != 2)
        value_error(l, "seed must read '<point>; <z>'");
    Expr ze = parse_value_expr(l, parts[1].first, parts[1].second);
    if (!ze.is_const())
        throw Error(ErrorCode::ValidationError, "line " + std::to_string(l.number) + ": seed z must be a constant");
    SeedSpec seed;
    seed.z = ze.node().value;
    std::vector<std::string> words = split_words(parts[0].first);
    auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::ValidationError, "line " + std::to_string(l.number) + ": " + what);
    };
    if (d.is_interval()) {
        if (words.size() != 1) fail("interval seed point must be a number");
        auto t = to_double(words[0]);
        if (!t) value_error(l, "expected a number");
        if (!(*t >= 0.0 && *t <= 1.0)) fail("seed point lies outside [0,1]");
        seed.point = d.at(*t);
        return seed;
    }
    if (words.size() == 1) {
        auto v = d.find_vertex(words[0]);
        if (!v) fail("unknown vertex '" + words[0] + "'");
        seed.point = d.vertex(*v);
        return seed;
    }
    if (words.size() != 3) fail("tree seed point must be a vertex or 'u v t'");
    auto u = d.find_vertex(words[0]);
    auto v = d.find_vertex(words[1]);
    auto t = to_double(words[2]);
    if (!u || !v) fail("unknown vertex in seed point");
    if (!t || !(*t >= 0.0 && *t <= 1.0)) fail("seed edge coordinate must lie in [0,1]");
    auto e = d.find_edge(*u, *v);
    if (!e) fail("seed vertices are not joined by an edge");
    double local = d.edges()[*e].u == *u ? *t : 1.0 - *t;
    seed.point = d.on_edge(*e, local);
    return seed;
}

}  // namespace detail

/// Parses and validates problem text.
inline ProblemSpec parse_problem(std::string_view text) {
    std::vector<detail::Line> lines = detail::split_lines(text);
    ProblemSpec spec;
    std::optional<std::string> domain_kind;
    std::vector<VertexSpec> vertices;
    std::vector<std::tuple<std::string, std::string, double, int>> edge_lines;
    std::optional<detail::Line> seed_line;

    for (const detail::Line& l : lines) {
        if (l.key == "function") {
            detail::require_once(spec.function.has_value(), l);
            spec.function = detail::parse_value_expr(l, l.value, 0);
        } else if (l.key == "series") {
            detail::require_once(spec.series.has_value(), l);
            std::vector<Expr> coeffs;
            for (auto& [part, off] : detail::split_top_level(l.value)) {
                Expr a = detail::parse_value_expr(l, part, off);
                if (a.depends_on_z())
                    throw Error(ErrorCode::ValidationError,
                                "line " + std::to_string(l.number) + ": series coefficients may not depend on z");
                coeffs.push_back(a);
            }
            spec.series = std::move(coeffs);
        } else if (l.key == "fixture") {
            detail::require_once(spec.fixture.has_value(), l);
            spec.fixture = l.value;
        } else if (l.key == "domain") {
            detail::require_once(domain_kind.has_value(), l);
            if (l.value != "interval" && l.value != "tree")
                value_error(l, "domain must be 'interval' or 'tree'");
            domain_kind = l.value;
        } else if (l.key == "vertex") {
            std::vector<std::string> w = detail::split_words(l.value);
            if (w.empty() || w.size() > 2)
                value_error(l, "vertex must read '<name> [coordinate]'");
            VertexSpec v{w[0], std::nullopt};
            if (w.size() == 2) {
                v.coordinate = detail::to_double(w[1]);
                if (!v.coordinate)
                    value_error(l, "bad vertex coordinate");
            }
            vertices.push_back(v);
        } else if (l.key == "edge") {
            std::vector<std::string> w = detail::split_words(l.value);
            std::optional<double> len = w.size() == 3 ? detail::to_double(w[2]) : std::nullopt;
            if (!len)
                value_error(l, "edge must read '<u> <v> <length>'");
            edge_lines.emplace_back(w[0], w[1], *len, l.number);
        } else if (l.key == "seed") {
            detail::require_once(seed_line.has_value(), l);
            seed_line = l;
        } else if (l.key.rfind("config.", 0) == 0) {
            std::string name = l.key.substr(7);
            auto v = detail::to_double(l.value);
            if (!v)
                value_error(l, "config value must be a number");
            EngineConfig probe;
            apply_override(probe, name, *v);
            auto it = std::find_if(spec.overrides.begin(), spec.overrides.end(),
                                   [&](const auto& kv) { return kv.first == name; });
            if (it != spec.overrides.end()) detail::require_once(true, l);
            spec.overrides.emplace_back(name, *v);
        } else {
            throw SyntaxError(static_cast<std::size_t>(l.number), 1, "unknown key '" + l.key + "'");
        }
    }

    int sources = int(spec.function.has_value()) + int(spec.series.has_value()) + int(spec.fixture.has_value());
    if (sources != 1) throw Error(ErrorCode::ValidationError, "exactly one of function, series, fixture is required");
    std::sort(spec.overrides.begin(), spec.overrides.end());

    if (spec.fixture) {
        if (domain_kind || !vertices.empty() || !edge_lines.empty() || seed_line)
            throw Error(ErrorCode::ValidationError, "a fixture accepts config overrides only");
        return spec;
    }

    if (!domain_kind) domain_kind = "interval";
    if (*domain_kind == "interval") {
        if (!vertices.empty() || !edge_lines.empty())
            throw Error(ErrorCode::ValidationError, "vertex/edge lines need 'domain = tree'");
        spec.domain = ParamDomain::interval();
    } else {
        std::vector<TreeEdge> edges;
        for (const auto& [u, v, len, line] : edge_lines) {
            auto find = [&](const std::string& name) {
                for (std::size_t i = 0; i < vertices.size(); ++i)
                    if (vertices[i].name == name) return i;
                throw Error(ErrorCode::ValidationError,
                            "line " + std::to_string(line) + ": unknown vertex '" + name + "'");
            };
            edges.push_back({find(u), find(v), len});
        }
        spec.domain = ParamDomain::tree(vertices, edges);
    }
    if (!seed_line) throw Error(ErrorCode::ValidationError, "seed is required");
    spec.seed = detail::parse_seed(*seed_line, *spec.domain);

    EntireFunction f = spec.function ? EntireFunction(*spec.function) : SeriesForm{*spec.series}.to_function();
    validate_piecewise(f, *spec.domain);
    return spec;
}

/// Canonical text form of a ProblemSpec; parse_problem reads it back to an equal one.
inline std::string render_problem(const ProblemSpec& spec) {
    std::ostringstream out;
    if (spec.fixture) out << "fixture = " << *spec.fixture << "\n";
    if (spec.function) out << "function = " << to_string(*spec.function) << "\n";
    if (spec.series) {
        out << "series = ";
        for (std::size_t i = 0; i < spec.series->size(); ++i) out << (i ? "; " : "") << to_string((*spec.series)[i]);
        out << "\n";
    }
    if (spec.domain) {
        const ParamDomain& d = *spec.domain;
        if (d.is_interval()) {
            out << "domain = interval\n";
        } else {
            out << "domain = tree\n";
            for (const TreeVertex& v : d.vertices()) out << "vertex = " << v.name << " " << format_double(v.coordinate) << "\n";
            for (const TreeEdge& e : d.edges())
                out << "edge = " << d.vertices()[e.u].name << " " << d.vertices()[e.v].name << " "
                    << format_double(e.length) << "\n";
        }
        if (spec.seed) {
            const DomainPoint& p = spec.seed->point;
            out << "seed = ";
            if (d.is_interval()) {
                out << format_double(d.coordinate(p));
            } else if (p.kind == DomainPoint::Kind::Vertex) {
                out << d.vertices()[p.id].name;
            } else {
                const TreeEdge& e = d.edges()[p.id];
                out << d.vertices()[e.u].name << " " << d.vertices()[e.v].name << " " << format_double(p.t);
            }
            out << "; " << to_string(Expr(spec.seed->z)) << "\n";
        }
    }
    for (const auto& [k, v] : spec.overrides) out << "config." << k << " = " << format_double(v) << "\n";
    return out.str();
}

struct Fixture {
    std::string name;
    std::string description;
    Status expected;
    std::string text;
};

/// Built-in problems, sorted by name.
inline const std::vector<Fixture>& list_fixtures() {
    static const std::vector<Fixture> fixtures = [] {
        std::vector<Fixture> v{
            {"counterexample-x2z-x", "x^2 z - x on [0,1] from (1, 1); the branch is 1/x", Status::AsymptoticBlowup,
             "function = x^2*z - x\ndomain = interval\nseed = 1; 1\n"},
            {"example1-sin", "x (e^z - e^{sin(1/x)}), zero at x = 0, from (1, sin 1); the branch oscillates",
             Status::NonConvergent,
             "function = guard(0; 0; x*(exp(z) - exp(sin(x^-1))))\ndomain = interval\nseed = 1; sin(1)\n"},
            {"example2-phi",
             "phi(z) - phi(omega(x)) with phi(z) = z e^{-z}; omega runs through the lower half-plane to 2 at "
             "x = 1/2, then equals 1/(1-x)",
             Status::AsymptoticBlowup,
             "function = guard(1; z*exp(-z); z*exp(-z) - split(0.5; 4*x*exp(-pi*i*(1 - 2*x)/2)*exp(-4*x*exp(-pi*i*(1 "
             "- 2*x)/2)); (1 - x)^-1*exp(-(1 - x)^-1)))\ndomain = interval\nseed = 0; 0\n"},
            {"monic-cubic-interval", "(z - 1 - x)(z + 1 - i x)(z - 2i) on [0,1] from (0, 1)", Status::Completed,
             "function = (z - 1 - x)*(z + 1 - i*x)*(z - 2*i)\ndomain = interval\nseed = 0; 1\n"},
            {"monic-cubic-ytree", "the same cubic on a three-leaf tree, seeded at leaf l1", Status::Completed,
             "function = (z - 1 - x)*(z + 1 - i*x)*(z - 2*i)\ndomain = tree\nvertex = l1 0\nvertex = c 0.5\n"
             "vertex = l2 1\nvertex = l3 0.8\nedge = l1 c 0.5\nedge = c l2 0.5\nedge = c l3 0.5\nseed = l1; 1\n"},
            {"monic-sqrt", "z^2 - x on [0,1] from the double zero (0, 0)", Status::Completed,
             "function = z^2 - x\ndomain = interval\nseed = 0; 0\n"},
            {"remark-exp", "exp(xz) - 1 on [0,1] from (1, 0); the zero branch", Status::Completed,
             "function = exp(x*z) - 1\ndomain = interval\nseed = 1; 0\n"},
            {"remark-exp-asymptotic", "exp(xz) - 1 on [0,1] from (1, 2 pi i); the branch is 2 pi i / x",
             Status::AsymptoticBlowup, "function = exp(x*z) - 1\ndomain = interval\nseed = 1; 2*pi*i\n"},
        };
        std::sort(v.begin(), v.end(), [](const Fixture& a, const Fixture& b) { return a.name < b.name; });
        return v;
    }();
    return fixtures;
}

inline const Fixture& find_fixture(const std::string& name) {
    for (const Fixture& f : list_fixtures())
        if (f.name == name) return f;
    throw Error(ErrorCode::ValidationError, "unknown fixture '" + name + "'");
}

/// A problem ready to run.
struct Problem {
    std::string name;
    EntireFunction f;
    ProblemSpec spec;  // fully expanded (never a bare fixture reference)
    ParamDomain domain;
    DomainPoint x0;
    cplx z0{};
    EngineConfig cfg;
};

inline Problem resolve(const ProblemSpec& spec) {
    ProblemSpec full = spec;
    std::string name = "problem";
    if (spec.fixture) {
        const Fixture& fx = find_fixture(*spec.fixture);
        full = parse_problem(fx.text);
        full.overrides = spec.overrides;
        name = fx.name;
    }
    EngineConfig cfg;
    for (const auto& [k, v] : full.overrides) apply_override(cfg, k, v);
    EntireFunction f = full.function ? EntireFunction(*full.function) : SeriesForm{*full.series}.to_function();
    return Problem{name, std::move(f), full, *full.domain, full.seed->point, full.seed->z, cfg};
}

inline RootBranch run_problem(const Problem& p) { return continue_branch(p.f, p.domain, p.x0, p.z0, p.cfg); }

inline int exit_code(Status s) {
    switch (s) {
        case Status::Completed: return 0;
        case Status::AsymptoticBlowup: return 2;
        case Status::DegenerateBarrier: return 3;
        case Status::NonConvergent: return 4;
        case Status::SeedInvalid: return 5;
    }
    return 1;
}

}  // namespace rootbranch
