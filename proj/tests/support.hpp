#pragma once

// Shared helpers for the test suites: brute-force oracles kept independent of
// the library's enumeration and search paths.

#include <algorithm>
#include <set>
#include <vector>

#include "glauberk/model.hpp"
#include "glauberk/window.hpp"

namespace testsupport {

// all connected vertex subsets of size in [1, k], by direct filtering of the
// power set; usable on windows with <= ~16 vertices
inline std::set<std::vector<std::int32_t>> brute_connected_subsets(
    const glauberk::WindowGraph& w, int k) {
    const int n = w.vertex_count();
    std::set<std::vector<std::int32_t>> out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) > k) continue;
        std::vector<std::int32_t> verts;
        for (int v = 0; v < n; ++v)
            if (mask & (1u << v)) verts.push_back(v);
        // connectivity by BFS inside the subset
        std::vector<std::int32_t> frontier{verts[0]};
        std::set<std::int32_t> seen{verts[0]};
        while (!frontier.empty()) {
            auto x = frontier.back();
            frontier.pop_back();
            auto inc = w.incidence(x);
            for (int a = 0; a < inc.count; ++a) {
                auto u = inc.other[a];
                if ((mask & (1u << u)) && !seen.count(u)) {
                    seen.insert(u);
                    frontier.push_back(u);
                }
            }
        }
        if (seen.size() == verts.size()) out.insert(verts);
    }
    return out;
}

inline glauberk::SpinState all_spins(const glauberk::WindowGraph& w, int v) {
    return glauberk::SpinState(w.vertex_count(), static_cast<std::int8_t>(v));
}

inline glauberk::Interactions all_couplings(const glauberk::WindowGraph& w, int v) {
    return glauberk::Interactions(w.edge_count(), static_cast<std::int8_t>(v));
}

}  // namespace testsupport
