#pragma once

// Decision procedure for k-stability of a periodic graph: some even-degree
// vertex v must have all neighbors of degree >= 3, and every connected set A
// with 2 <= |A| <= k meeting B_1(v) must satisfy the strict boundary-edge
// inequality  |edges(A, exterior)| - d_v > 0.  By periodicity it is enough to
// test one representative per local index on a window large enough that the
// ball of radius k+2 around it cannot wrap.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "glauberk/cellspec.hpp"
#include "glauberk/window.hpp"

namespace glauberk {

struct StabilityResult {
    bool stable = false;
    std::optional<int> witness_local;
    std::string reason;
};

namespace detail {

// all connected vertex sets with |A| <= k, A inside `allowed`, A meeting `seeds`
inline std::vector<std::vector<int>> connected_sets_touching(
    const WindowGraph& w, const std::vector<int>& allowed, const std::vector<int>& seeds,
    int k) {
    std::vector<char> ok(w.vertex_count(), 0);
    for (int v : allowed) ok[v] = 1;
    std::set<std::vector<int>> found;
    std::vector<int> cur;

    std::function<void(int)> grow = [&](int) {
        std::vector<int> key = cur;
        std::sort(key.begin(), key.end());
        if (!found.insert(key).second) return;
        if (static_cast<int>(cur.size()) == k) return;
        std::set<int> cands;
        for (int x : cur) {
            auto inc = w.incidence(x);
            for (int a = 0; a < inc.count; ++a) {
                int u = inc.other[a];
                if (ok[u] && std::find(cur.begin(), cur.end(), u) == cur.end())
                    cands.insert(u);
            }
        }
        for (int u : cands) {
            cur.push_back(u);
            grow(0);
            cur.pop_back();
        }
    };
    for (int s : seeds) {
        if (!ok[s]) continue;
        cur.assign(1, s);
        grow(0);
    }
    return {found.begin(), found.end()};
}

}  // namespace detail

inline StabilityResult check_k_stable(const PeriodicGraph& g, int k) {
    StabilityResult res;
    bool any_even = false;
    for (int d : g.local_degree)
        if (d % 2 == 0) any_even = true;
    if (!any_even) {
        res.reason = "no even-degree vertex";
        return res;
    }

    int max_off = 1;
    for (const auto& e : g.spec.cell_edges)
        for (int c : e.offset) max_off = std::max(max_off, std::abs(c));
    const int half = (k + 3) * max_off + 1;
    WindowGraph w(g, centered_extent(g.dimension(), half), Boundary::Toroidal);

    std::vector<std::string> failures;
    for (int local = 0; local < g.spec.vertex_count(); ++local) {
        if (g.local_degree[local] % 2 != 0) continue;
        const int dv = g.local_degree[local];
        VertexId vid{std::vector<int>(g.dimension(), 0), local};
        const int v = w.index_of(vid);

        bool ok = true;
        auto inc = w.incidence(v);
        for (int a = 0; a < inc.count && ok; ++a) {
            if (w.degree(inc.other[a]) < 3) {
                failures.push_back("local " + std::to_string(local) + ": neighbor " +
                                   w.vertex_name(inc.other[a]) + " has degree " +
                                   std::to_string(w.degree(inc.other[a])) + " < 3");
                ok = false;
            }
        }
        if (!ok) continue;

        // sets with v in dA u d^ext A are connected sets meeting B_1(v)
        auto allowed = ball(w, v, k + 1);
        auto seeds = ball(w, v, 1);
        auto sets = detail::connected_sets_touching(w, allowed, seeds, k);
        for (const auto& a : sets) {
            if (static_cast<int>(a.size()) < 2) continue;
            int crossing = 0;
            bool touches_v = false;
            for (int x : a) {
                auto xi = w.incidence(x);
                for (int t = 0; t < xi.count; ++t) {
                    int y = xi.other[t];
                    if (std::binary_search(a.begin(), a.end(), y)) continue;
                    ++crossing;
                    if (y == v) touches_v = true;
                }
                if (x == v) touches_v = true;
            }
            if (!touches_v) continue;
            if (crossing - dv <= 0) {
                std::string set_str;
                for (int x : a) set_str += (set_str.empty() ? "" : ",") + w.vertex_name(x);
                failures.push_back("local " + std::to_string(local) +
                                   ": boundary-edge inequality fails for A={" + set_str +
                                   "} (" + std::to_string(crossing) + " - " +
                                   std::to_string(dv) + " <= 0)");
                ok = false;
                break;
            }
        }
        if (ok) {
            res.stable = true;
            res.witness_local = local;
            res.reason = "vertex with local index " + std::to_string(local) +
                         " (degree " + std::to_string(dv) + ") satisfies both conditions";
            return res;
        }
    }
    res.reason = failures.empty() ? "no even-degree vertex" : failures.front();
    for (size_t i = 1; i < failures.size(); ++i) res.reason += "; " + failures[i];
    return res;
}

}  // namespace glauberk
