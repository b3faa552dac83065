#pragma once

// Periodic graphs embedded in R^d, described by a unit cell: vertices with
// positions in [0,1)^d and edge templates (i, j, offset) meaning vertex i in
// cell z is adjacent to vertex j in cell z + offset. The infinite graph is the
// tessellation of the cell over Z^d.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "glauberk/errors.hpp"

namespace glauberk {

using Offset = std::vector<int>;

struct EdgeTemplate {
    int i = 0;
    int j = 0;
    Offset offset;

    bool operator==(const EdgeTemplate& o) const {
        return i == o.i && j == o.j && offset == o.offset;
    }
};

inline bool offset_is_zero(const Offset& o) {
    return std::all_of(o.begin(), o.end(), [](int c) { return c == 0; });
}

inline Offset negate(const Offset& o) {
    Offset r(o.size());
    for (size_t a = 0; a < o.size(); ++a) r[a] = -o[a];
    return r;
}

// An edge and its reverse with negated offset name the same undirected edge.
// Canonical form: smaller endpoint first; ties broken by requiring the offset
// to be lexicographically nonnegative.
inline EdgeTemplate canonical_edge(const EdgeTemplate& e) {
    EdgeTemplate rev{e.j, e.i, negate(e.offset)};
    if (e.i < e.j) return e;
    if (e.i > e.j) return rev;
    return (e.offset <= rev.offset) ? e : rev;
}

struct CellSpec {
    int dimension = 0;
    // cell_vertices[local] = position; locals are dense 0..n-1.
    std::vector<std::vector<double>> cell_vertices;
    std::vector<EdgeTemplate> cell_edges;  // canonical, sorted, unique

    int vertex_count() const { return static_cast<int>(cell_vertices.size()); }
    int edge_count() const { return static_cast<int>(cell_edges.size()); }
};

namespace detail {
inline bool edge_less(const EdgeTemplate& a, const EdgeTemplate& b) {
    if (a.i != b.i) return a.i < b.i;
    if (a.j != b.j) return a.j < b.j;
    return a.offset < b.offset;
}
}  // namespace detail

// Validates the cell and brings edges to canonical sorted form.
inline CellSpec finalize_cell(CellSpec spec) {
    if (spec.dimension < 1) throw SpecError("cell dimension must be >= 1");
    if (spec.cell_vertices.empty()) throw SpecError("cell has no vertices");
    for (int v = 0; v < spec.vertex_count(); ++v) {
        const auto& pos = spec.cell_vertices[v];
        if (static_cast<int>(pos.size()) != spec.dimension)
            throw SpecError("vertex " + std::to_string(v) + " has wrong coordinate count");
        for (double c : pos)
            if (!(c >= 0.0 && c < 1.0))
                throw SpecError("vertex " + std::to_string(v) +
                                " position out of [0,1)");
    }
    std::vector<EdgeTemplate> canon;
    canon.reserve(spec.cell_edges.size());
    for (const auto& e : spec.cell_edges) {
        if (e.i < 0 || e.i >= spec.vertex_count() || e.j < 0 || e.j >= spec.vertex_count())
            throw SpecError("edge references unknown local vertex");
        if (static_cast<int>(e.offset.size()) != spec.dimension)
            throw SpecError("edge offset has wrong dimension");
        if (e.i == e.j && offset_is_zero(e.offset)) throw SpecError("self-loop edge");
        canon.push_back(canonical_edge(e));
    }
    std::sort(canon.begin(), canon.end(), detail::edge_less);
    for (size_t a = 1; a < canon.size(); ++a)
        if (canon[a] == canon[a - 1]) throw SpecError("duplicate edge template");
    spec.cell_edges = std::move(canon);

    // every local vertex must have degree >= 1 in the infinite graph
    std::vector<int> deg(spec.vertex_count(), 0);
    for (const auto& e : spec.cell_edges) {
        deg[e.i]++;
        deg[e.j]++;
    }
    for (int v = 0; v < spec.vertex_count(); ++v)
        if (deg[v] == 0)
            throw SpecError("vertex " + std::to_string(v) + " is isolated");
    return spec;
}

struct PeriodicGraph {
    CellSpec spec;
    std::vector<int> local_degree;  // translation-invariant, by local index
    int max_degree = 0;             // d_G

    int dimension() const { return spec.dimension; }
};

inline PeriodicGraph make_periodic_graph(CellSpec spec) {
    PeriodicGraph g;
    g.spec = finalize_cell(std::move(spec));
    g.local_degree.assign(g.spec.vertex_count(), 0);
    for (const auto& e : g.spec.cell_edges) {
        g.local_degree[e.i]++;
        g.local_degree[e.j]++;
    }
    g.max_degree = *std::max_element(g.local_degree.begin(), g.local_degree.end());
    return g;
}

// Cubic lattice L_d: one vertex per cell, one edge template per axis.
inline PeriodicGraph build_cubic(int d) {
    if (d < 1) throw SpecError("cubic lattice needs dimension >= 1");
    CellSpec spec;
    spec.dimension = d;
    spec.cell_vertices = {std::vector<double>(d, 0.0)};
    for (int axis = 0; axis < d; ++axis) {
        Offset off(d, 0);
        off[axis] = 1;
        spec.cell_edges.push_back({0, 0, off});
    }
    return make_periodic_graph(std::move(spec));
}

// Honeycomb lattice as a 2-graph: two vertices per cell, degree 3.
inline PeriodicGraph build_hexagonal() {
    CellSpec spec;
    spec.dimension = 2;
    spec.cell_vertices = {{0.0, 0.0}, {0.5, 0.5}};
    spec.cell_edges = {
        {0, 1, {0, 0}},
        {1, 0, {1, 0}},
        {1, 0, {0, 1}},
    };
    return make_periodic_graph(std::move(spec));
}

// ---- cell-spec text format ----------------------------------------------
//   dim <d>
//   vertex <local> <c1> ... <cd>
//   edge <i> <j> <o1> ... <od>
// '#' starts a comment.

inline PeriodicGraph parse_cell_spec(const std::string& text) {
    CellSpec spec;
    std::map<int, std::vector<double>> vertices;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_dim = false;
    auto fail = [&](const std::string& msg) {
        throw SpecError("cell spec line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "dim") {
            if (!(ls >> spec.dimension) || spec.dimension < 1) fail("bad dimension");
            have_dim = true;
        } else if (tok == "vertex") {
            if (!have_dim) fail("dim must come first");
            int local;
            if (!(ls >> local) || local < 0) fail("bad vertex index");
            std::vector<double> pos(spec.dimension);
            for (auto& c : pos)
                if (!(ls >> c)) fail("missing vertex coordinate");
            if (vertices.count(local)) fail("duplicate local index");
            vertices[local] = std::move(pos);
        } else if (tok == "edge") {
            if (!have_dim) fail("dim must come first");
            EdgeTemplate e;
            if (!(ls >> e.i >> e.j)) fail("bad edge endpoints");
            e.offset.resize(spec.dimension);
            for (auto& c : e.offset)
                if (!(ls >> c)) fail("missing edge offset component");
            spec.cell_edges.push_back(std::move(e));
        } else {
            fail("unknown directive '" + tok + "'");
        }
    }
    if (!have_dim) throw SpecError("cell spec: missing 'dim' line");
    if (vertices.empty()) throw SpecError("cell spec: empty vertex list");
    int expected = 0;
    for (const auto& [local, pos] : vertices) {
        if (local != expected)
            throw SpecError("cell spec: local indices must be dense from 0 (missing " +
                            std::to_string(expected) + ")");
        spec.cell_vertices.push_back(pos);
        ++expected;
    }
    try {
        return make_periodic_graph(std::move(spec));
    } catch (const SpecError& e) {
        throw SpecError(std::string("cell spec: ") + e.what());
    }
}

inline std::string serialize_cell_spec(const PeriodicGraph& g, const std::string& comment = "") {
    std::ostringstream out;
    out.precision(17);
    if (!comment.empty()) {
        std::istringstream cs(comment);
        std::string cl;
        while (std::getline(cs, cl)) out << "# " << cl << "\n";
    }
    out << "dim " << g.spec.dimension << "\n";
    for (int v = 0; v < g.spec.vertex_count(); ++v) {
        out << "vertex " << v;
        for (double c : g.spec.cell_vertices[v]) out << " " << c;
        out << "\n";
    }
    for (const auto& e : g.spec.cell_edges) {
        out << "edge " << e.i << " " << e.j;
        for (int c : e.offset) out << " " << c;
        out << "\n";
    }
    return out.str();
}

}  // namespace glauberk
