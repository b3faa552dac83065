#pragma once

// Gamma construction: every edge of a base periodic graph is replaced by a
// chain of m cycles of 2*ell vertices; consecutive cycles share exactly one
// vertex, and the shared vertices sit ell apart. Original vertices survive,
// and originally adjacent vertices end up at graph distance ell*m.

#include <array>
#include <string>
#include <vector>

#include "glauberk/cellspec.hpp"
#include "glauberk/errors.hpp"

namespace glauberk {

struct GammaChain {
    int base_template = 0;       // edge template index of the base graph
    std::vector<int> commons;    // locals of w_0 .. w_m along the chain;
                                 // w_0 = base endpoint i, w_m = base endpoint j
                                 // (w_m lives in the cell shifted by the offset)
    // branches[cycle][branch] = interior locals from w_cycle to w_{cycle+1}
    std::vector<std::array<std::vector<int>, 2>> branches;
};

struct GammaBuild {
    PeriodicGraph graph;
    std::vector<GammaChain> chains;
    std::vector<int> original_locals;  // locals inherited from the base graph
    std::vector<int> common_locals;    // the set V_I: originals + shared vertices
    int ell = 0;
    int m = 0;
};

inline GammaBuild build_gamma(const PeriodicGraph& base, int ell, int m) {
    if (ell < 2) throw SpecError("gamma construction needs ell >= 2");
    if (m < 1) throw SpecError("gamma construction needs m >= 1");
    const int d = base.dimension();
    CellSpec spec;
    spec.dimension = d;
    spec.cell_vertices = base.spec.cell_vertices;

    GammaBuild out;
    out.ell = ell;
    out.m = m;
    for (int v = 0; v < base.spec.vertex_count(); ++v) {
        out.original_locals.push_back(v);
        out.common_locals.push_back(v);
    }

    auto fold01 = [](double x) {
        double f = x - std::floor(x);
        return (f >= 1.0) ? 0.0 : f;
    };

    for (int t = 0; t < base.spec.edge_count(); ++t) {
        const auto& e = base.spec.cell_edges[t];
        GammaChain chain;
        chain.base_template = t;

        const auto& pi = base.spec.cell_vertices[e.i];
        const auto& pj = base.spec.cell_vertices[e.j];
        auto interp = [&](double frac) {
            std::vector<double> p(d);
            for (int a = 0; a < d; ++a)
                p[a] = fold01(pi[a] + frac * (pj[a] + e.offset[a] - pi[a]));
            return p;
        };
        auto add_vertex = [&](double frac) {
            spec.cell_vertices.push_back(interp(frac));
            return static_cast<int>(spec.cell_vertices.size()) - 1;
        };

        chain.commons.push_back(e.i);
        for (int c = 1; c < m; ++c) {
            int w = add_vertex(static_cast<double>(c) / m);
            chain.commons.push_back(w);
            out.common_locals.push_back(w);
        }
        chain.commons.push_back(e.j);

        const Offset zero(d, 0);
        for (int c = 0; c < m; ++c) {
            const bool last = (c == m - 1);
            std::array<std::vector<int>, 2> branches;
            for (int b = 0; b < 2; ++b) {
                std::vector<int>& path = branches[b];
                for (int s = 1; s < ell; ++s) {
                    double frac = (static_cast<double>(c) + static_cast<double>(s) / ell) / m;
                    // keep the two branches visually apart
                    if (b == 1) frac += 1.0 / (4.0 * ell * m * (s + 1));
                    path.push_back(add_vertex(frac));
                }
                // edges along w_c, path..., w_{c+1}
                int prev = chain.commons[c];
                for (int s = 0; s < static_cast<int>(path.size()); ++s) {
                    spec.cell_edges.push_back({prev, path[s], zero});
                    prev = path[s];
                }
                spec.cell_edges.push_back(
                    {prev, chain.commons[c + 1], last ? e.offset : zero});
            }
            chain.branches.push_back(std::move(branches));
        }
        out.chains.push_back(std::move(chain));
    }

    out.graph = make_periodic_graph(std::move(spec));
    return out;
}

}  // namespace glauberk
