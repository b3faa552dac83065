#pragma once

// Energy bookkeeping and flip rates for the +/-J model: Hamiltonian increment
// over flip-set boundaries, window Hamiltonian and density, heat-bath rates
// for arbitrary temperature profiles, Bernoulli sampling of couplings and
// initial spins, and fixed-assignment file loaders.

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "glauberk/errors.hpp"
#include "glauberk/flipsets.hpp"
#include "glauberk/rng.hpp"
#include "glauberk/window.hpp"

namespace glauberk {

// +1/-1 per window vertex
using SpinState = std::vector<std::int8_t>;
// +1/-1 per realized window edge, quenched for the whole run
using Interactions = std::vector<std::int8_t>;

// ---- temperature profiles -------------------------------------------------

struct ZeroTemperature {};

struct ConstantTemperature {
    double value = 1.0;
};

// T(t) = c / ln(t0 + t); satisfies T(t) ln t -> c.
struct LogDecayTemperature {
    double c = 1.0;
    double t0 = 2.718281828459045;
};

// right-continuous step interpolation of sorted (t, T) pairs
struct TableTemperature {
    std::vector<std::pair<double, double>> points;
};

class TemperatureProfile {
public:
    TemperatureProfile() : var_(ZeroTemperature{}) {}
    TemperatureProfile(ZeroTemperature v) : var_(v) {}
    TemperatureProfile(ConstantTemperature v) : var_(v) {
        if (!(v.value > 0)) throw SpecError("constant temperature must be > 0");
    }
    TemperatureProfile(LogDecayTemperature v) : var_(v) {
        if (!(v.c > 0)) throw SpecError("log-decay constant must be > 0");
        if (!(v.t0 >= std::exp(1.0))) throw SpecError("log-decay t0 must be >= e");
    }
    TemperatureProfile(TableTemperature v) : var_(std::move(v)) {
        auto& pts = std::get<TableTemperature>(var_).points;
        if (pts.empty()) throw SpecError("table profile needs at least one point");
        for (size_t i = 0; i < pts.size(); ++i) {
            if (pts[i].second < 0) throw SpecError("table temperature must be >= 0");
            if (i > 0 && !(pts[i].first > pts[i - 1].first))
                throw SpecError("table times must be strictly increasing");
        }
    }

    static TemperatureProfile zero() { return TemperatureProfile(ZeroTemperature{}); }
    static TemperatureProfile constant(double T0) {
        return TemperatureProfile(ConstantTemperature{T0});
    }
    static TemperatureProfile log_decay(double c, double t0 = 2.718281828459045) {
        return TemperatureProfile(LogDecayTemperature{c, t0});
    }
    static TemperatureProfile table(std::vector<std::pair<double, double>> pts) {
        return TemperatureProfile(TableTemperature{std::move(pts)});
    }

    bool is_zero() const { return std::holds_alternative<ZeroTemperature>(var_); }

    double at(double t) const {
        if (std::holds_alternative<ZeroTemperature>(var_)) return 0.0;
        if (auto* c = std::get_if<ConstantTemperature>(&var_)) return c->value;
        if (auto* l = std::get_if<LogDecayTemperature>(&var_))
            return l->c / std::log(l->t0 + t);
        const auto& pts = std::get<TableTemperature>(var_).points;
        if (t < pts.front().first) return pts.front().second;
        // last point with time <= t
        size_t lo = 0, hi = pts.size();
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            if (pts[mid].first <= t)
                lo = mid;
            else
                hi = mid;
        }
        return pts[lo].second;
    }

    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        if (std::holds_alternative<ZeroTemperature>(var_)) {
            os << "zero";
        } else if (auto* c = std::get_if<ConstantTemperature>(&var_)) {
            os << "const:" << c->value;
        } else if (auto* l = std::get_if<LogDecayTemperature>(&var_)) {
            os << "logdecay:" << l->c << "," << l->t0;
        } else {
            os << "table:";
            const auto& pts = std::get<TableTemperature>(var_).points;
            for (size_t i = 0; i < pts.size(); ++i)
                os << (i ? ";" : "") << pts[i].first << "," << pts[i].second;
        }
        return os.str();
    }

private:
    std::variant<ZeroTemperature, ConstantTemperature, LogDecayTemperature, TableTemperature>
        var_;
};

// ---- energies ---------------------------------------------------------------

// Hamiltonian increment of flipping the set A: twice the signed sum of
// couplings on edges crossing from A to its exterior. Always an even integer.
inline int delta_H(const WindowGraph& w, const Interactions& J, const SpinState& s,
                   std::span<const std::int32_t> a) {
    if (a.empty()) throw SpecError("delta_H of an empty flip set");
    int sum = 0;
    for (std::int32_t x : a) {
        auto inc = w.incidence(x);
        for (int t = 0; t < inc.count; ++t) {
            std::int32_t y = inc.other[t];
            if (std::binary_search(a.begin(), a.end(), y)) continue;
            sum += static_cast<int>(J[inc.eid[t]]) * s[x] * s[y];
        }
    }
    return 2 * sum;
}

inline int delta_H(const WindowGraph& w, const Interactions& J, const SpinState& s,
                   const std::vector<std::int32_t>& a) {
    return delta_H(w, J, s, std::span<const std::int32_t>(a.data(), a.size()));
}

inline std::int64_t window_H(const WindowGraph& w, const Interactions& J,
                             const SpinState& s) {
    std::int64_t h = 0;
    const auto& edges = w.edges();
    for (size_t e = 0; e < edges.size(); ++e)
        h -= static_cast<std::int64_t>(J[e]) * s[edges[e].u] * s[edges[e].v];
    return h;
}

inline double density(const WindowGraph& w, const Interactions& J, const SpinState& s) {
    return static_cast<double>(window_H(w, J, s)) / static_cast<double>(w.vertex_count());
}

inline void apply_flip(SpinState& s, std::span<const std::int32_t> a) {
    for (std::int32_t x : a) s[x] = static_cast<std::int8_t>(-s[x]);
}

// ---- rates ------------------------------------------------------------------

// Heat-bath acceptance probability. T(t) = 0 is exact: {0, 1/2, 1} by the
// sign of delta. Positive T evaluates the logistic in its stable form with
// the exponent clamped at +/-700.
inline double rate(int delta, const TemperatureProfile& profile, double t) {
    const double T = profile.at(t);
    if (T == 0.0) {
        if (delta > 0) return 0.0;
        if (delta < 0) return 1.0;
        return 0.5;
    }
    double a = 2.0 * static_cast<double>(delta) / T;
    if (a > 700.0) a = 700.0;
    if (a < -700.0) a = -700.0;
    if (a >= 0.0) {
        const double e = std::exp(-a);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(a));
}

// ---- sampling ---------------------------------------------------------------

inline Interactions sample_interactions(const WindowGraph& w, double alpha, Rng& rng) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw SpecError("alpha must lie in [0,1]");
    Interactions J(w.edge_count());
    for (auto& j : J) j = rng.bernoulli(alpha) ? std::int8_t{1} : std::int8_t{-1};
    return J;
}

inline SpinState sample_initial(const WindowGraph& w, double gamma, Rng& rng) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw SpecError("gamma must lie in [0,1]");
    SpinState s(w.vertex_count());
    for (auto& v : s) v = rng.bernoulli(gamma) ? std::int8_t{1} : std::int8_t{-1};
    return s;
}

// ---- assignment files -------------------------------------------------------
// Shared tokenizer with the cell-spec format. Coupling lines address edge
// templates (applied in every cell); a leading '@' anchors the line to one
// cell. Later lines win. `default <+1|-1>` fills everything first.
//
//   spin <cell_1> ... <cell_d> <local> <+1|-1>
//   coupling <i> <j> <o_1> ... <o_d> <+1|-1>
//   coupling @ <cell_1> ... <cell_d> <i> <j> <o_1> ... <o_d> <+1|-1>

namespace detail {
inline std::int8_t parse_pm1(const std::string& tok, int lineno) {
    if (tok == "+1" || tok == "1") return 1;
    if (tok == "-1") return -1;
    throw SpecError("assignment line " + std::to_string(lineno) +
                    ": expected +1 or -1, got '" + tok + "'");
}
}  // namespace detail

inline SpinState load_spin_assignment(const WindowGraph& w, const std::string& text) {
    const int d = w.dimension();
    std::vector<char> have(w.vertex_count(), 0);
    SpinState s(w.vertex_count(), 0);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "default") {
            std::string v;
            if (!(ls >> v))
                throw SpecError("spin line " + std::to_string(lineno) + ": missing value");
            std::fill(s.begin(), s.end(), detail::parse_pm1(v, lineno));
            std::fill(have.begin(), have.end(), 1);
        } else if (tok == "spin") {
            VertexId vid;
            vid.cell.resize(d);
            for (auto& c : vid.cell)
                if (!(ls >> c))
                    throw SpecError("spin line " + std::to_string(lineno) + ": bad cell");
            std::string v;
            if (!(ls >> vid.local >> v))
                throw SpecError("spin line " + std::to_string(lineno) + ": bad entry");
            s[w.index_of(vid)] = detail::parse_pm1(v, lineno);
            have[w.index_of(vid)] = 1;
        } else {
            throw SpecError("spin line " + std::to_string(lineno) + ": unknown directive '" +
                            tok + "'");
        }
    }
    for (int v = 0; v < w.vertex_count(); ++v)
        if (!have[v])
            throw SpecError("spin assignment missing vertex " + w.vertex_name(v));
    return s;
}

inline Interactions load_coupling_assignment(const WindowGraph& w, const std::string& text) {
    const int d = w.dimension();
    const auto& templates = w.parent().spec.cell_edges;
    std::vector<char> have(w.edge_count(), 0);
    Interactions J(w.edge_count(), 0);

    auto match_template = [&](const EdgeTemplate& q) -> int {
        EdgeTemplate c = canonical_edge(q);
        for (size_t t = 0; t < templates.size(); ++t)
            if (templates[t] == c) return static_cast<int>(t);
        return -1;
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        auto fail = [&](const std::string& msg) {
            throw SpecError("coupling line " + std::to_string(lineno) + ": " + msg);
        };
        if (tok == "default") {
            std::string v;
            if (!(ls >> v)) fail("missing value");
            std::fill(J.begin(), J.end(), detail::parse_pm1(v, lineno));
            std::fill(have.begin(), have.end(), 1);
        } else if (tok == "coupling") {
            std::string next;
            if (!(ls >> next)) fail("truncated line");
            bool anchored = (next == "@");
            std::vector<int> cell(d);
            EdgeTemplate q;
            if (anchored) {
                for (auto& c : cell)
                    if (!(ls >> c)) fail("bad anchor cell");
                if (!(ls >> q.i)) fail("bad endpoints");
            } else {
                q.i = std::stoi(next);
            }
            if (!(ls >> q.j)) fail("bad endpoints");
            q.offset.resize(d);
            for (auto& c : q.offset)
                if (!(ls >> c)) fail("bad offset");
            std::string v;
            if (!(ls >> v)) fail("missing value");
            const std::int8_t val = detail::parse_pm1(v, lineno);
            // the canonical template keeps the anchor cell of endpoint i; if
            // canonicalization swapped endpoints, the anchor moves by offset
            EdgeTemplate canon = canonical_edge(q);
            if (anchored && !(canon == q))
                for (int a = 0; a < d; ++a) cell[a] += q.offset[a];
            int tpl = match_template(q);
            if (tpl < 0) fail("no such edge template in the cell");
            bool hit = false;
            const auto& edges = w.edges();
            for (size_t e = 0; e < edges.size(); ++e) {
                if (edges[e].tpl != tpl) continue;
                if (anchored && edges[e].cell != cell) continue;
                J[e] = val;
                have[e] = 1;
                hit = true;
            }
            if (anchored && !hit) fail("anchored coupling matches no realized edge");
        } else {
            fail("unknown directive '" + tok + "'");
        }
    }
    for (int e = 0; e < w.edge_count(); ++e)
        if (!have[e])
            throw SpecError("coupling assignment missing edge " +
                            w.vertex_name(w.edges()[e].u) + " - " +
                            w.vertex_name(w.edges()[e].v));
    return J;
}

inline std::string serialize_spin_assignment(const WindowGraph& w, const SpinState& s) {
    std::ostringstream out;
    for (int v = 0; v < w.vertex_count(); ++v) {
        VertexId vid = w.vertex_of(v);
        out << "spin";
        for (int c : vid.cell) out << " " << c;
        out << " " << vid.local << " " << (s[v] > 0 ? "+1" : "-1") << "\n";
    }
    return out.str();
}

}  // namespace glauberk
