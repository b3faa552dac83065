#pragma once

// Finite realization of a periodic graph over a block of cells. Toroidal
// windows wrap edge offsets modulo the extent and keep every vertex at its
// infinite-graph degree; free windows drop edges that leave the block.
// Realized edges form a list (parallel edges are kept: on a 2-cell-wide torus
// the two wrap copies of a template are distinct edges).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "glauberk/cellspec.hpp"
#include "glauberk/errors.hpp"

namespace glauberk {

enum class Boundary { Free, Toroidal };

inline std::string to_string(Boundary b) {
    return b == Boundary::Free ? "free" : "toroidal";
}

struct AxisRange {
    int lo = 0;
    int hi = 0;  // exclusive
    int length() const { return hi - lo; }
};

using Extent = std::vector<AxisRange>;

struct VertexId {
    std::vector<int> cell;
    int local = 0;
};

struct WindowEdge {
    std::int32_t u = 0;
    std::int32_t v = 0;
    std::int32_t tpl = 0;   // edge template index in the parent cell spec
    std::vector<int> cell;  // cell whose template application produced it
};

class WindowGraph {
public:
    WindowGraph(PeriodicGraph parent, Extent extent, Boundary boundary)
        : parent_(std::move(parent)), extent_(std::move(extent)), boundary_(boundary) {
        const int d = parent_.dimension();
        if (static_cast<int>(extent_.size()) != d)
            throw SpecError("extent dimension mismatch");
        for (const auto& r : extent_)
            if (r.length() < 1) throw SpecError("window extent empty on an axis");
        n_locals_ = parent_.spec.vertex_count();
        n_cells_ = 1;
        for (const auto& r : extent_) n_cells_ *= static_cast<std::int64_t>(r.length());
        if (n_cells_ * n_locals_ > (std::int64_t{1} << 31))
            throw SpecError("window too large");
        realize();
        check_connected();
    }

    const PeriodicGraph& parent() const { return parent_; }
    const Extent& extent() const { return extent_; }
    Boundary boundary() const { return boundary_; }
    int dimension() const { return parent_.dimension(); }
    int locals_per_cell() const { return n_locals_; }
    std::int64_t cell_count() const { return n_cells_; }
    int vertex_count() const { return static_cast<int>(n_cells_ * n_locals_); }
    const std::vector<WindowEdge>& edges() const { return edges_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    int degree(int v) const { return inc_off_[v + 1] - inc_off_[v]; }

    // incident (edge_id, other endpoint) pairs of v
    struct Incidence {
        const std::int32_t* eid;
        const std::int32_t* other;
        int count;
    };
    Incidence incidence(int v) const {
        return {inc_edge_.data() + inc_off_[v], inc_other_.data() + inc_off_[v],
                inc_off_[v + 1] - inc_off_[v]};
    }

    bool in_window(const VertexId& vid) const {
        if (static_cast<int>(vid.cell.size()) != dimension()) return false;
        if (vid.local < 0 || vid.local >= n_locals_) return false;
        for (int a = 0; a < dimension(); ++a)
            if (vid.cell[a] < extent_[a].lo || vid.cell[a] >= extent_[a].hi) return false;
        return true;
    }

    int index_of(const VertexId& vid) const {
        if (!in_window(vid)) throw SpecError("vertex not in window");
        std::int64_t c = 0;
        for (int a = 0; a < dimension(); ++a)
            c = c * extent_[a].length() + (vid.cell[a] - extent_[a].lo);
        return static_cast<int>(c * n_locals_ + vid.local);
    }

    VertexId vertex_of(int index) const {
        VertexId vid;
        vid.local = index % n_locals_;
        std::int64_t c = index / n_locals_;
        vid.cell.assign(dimension(), 0);
        for (int a = dimension() - 1; a >= 0; --a) {
            vid.cell[a] = extent_[a].lo + static_cast<int>(c % extent_[a].length());
            c /= extent_[a].length();
        }
        return vid;
    }

    int local_of(int index) const { return index % n_locals_; }

    // True when the cell of `index` is at least `shell` cells away from every
    // free face of the window (all cells qualify under toroidal boundary).
    bool is_interior(int index, int shell) const {
        if (boundary_ == Boundary::Toroidal) return true;
        VertexId vid = vertex_of(index);
        for (int a = 0; a < dimension(); ++a) {
            if (vid.cell[a] - extent_[a].lo < shell) return false;
            if (extent_[a].hi - 1 - vid.cell[a] < shell) return false;
        }
        return true;
    }

    std::string vertex_name(int index) const {
        VertexId vid = vertex_of(index);
        std::string s;
        for (size_t a = 0; a < vid.cell.size(); ++a) {
            if (a) s += ",";
            s += std::to_string(vid.cell[a]);
        }
        s += ":" + std::to_string(vid.local);
        return s;
    }

private:
    void realize() {
        const int d = dimension();
        edges_.reserve(static_cast<size_t>(n_cells_) * parent_.spec.cell_edges.size());
        std::vector<int> cell(d);
        for (std::int64_t ci = 0; ci < n_cells_; ++ci) {
            std::int64_t c = ci;
            for (int a = d - 1; a >= 0; --a) {
                cell[a] = extent_[a].lo + static_cast<int>(c % extent_[a].length());
                c /= extent_[a].length();
            }
            for (std::int32_t t = 0; t < static_cast<std::int32_t>(parent_.spec.cell_edges.size()); ++t) {
                const auto& e = parent_.spec.cell_edges[t];
                std::vector<int> tgt(d);
                bool inside = true;
                for (int a = 0; a < d; ++a) {
                    int z = cell[a] + e.offset[a];
                    if (boundary_ == Boundary::Toroidal) {
                        const int len = extent_[a].length();
                        int rel = (z - extent_[a].lo) % len;
                        if (rel < 0) rel += len;
                        z = extent_[a].lo + rel;
                    } else if (z < extent_[a].lo || z >= extent_[a].hi) {
                        inside = false;
                        break;
                    }
                    tgt[a] = z;
                }
                if (!inside) continue;
                WindowEdge we;
                we.cell = cell;
                we.tpl = t;
                we.u = index_of(VertexId{cell, e.i});
                we.v = index_of(VertexId{tgt, e.j});
                edges_.push_back(std::move(we));
            }
        }
        // CSR incidence
        const int n = vertex_count();
        inc_off_.assign(n + 1, 0);
        for (const auto& e : edges_) {
            inc_off_[e.u + 1]++;
            inc_off_[e.v + 1]++;
        }
        std::partial_sum(inc_off_.begin(), inc_off_.end(), inc_off_.begin());
        inc_edge_.resize(edges_.size() * 2);
        inc_other_.resize(edges_.size() * 2);
        std::vector<int> cursor(inc_off_.begin(), inc_off_.end() - 1);
        for (std::int32_t id = 0; id < static_cast<std::int32_t>(edges_.size()); ++id) {
            const auto& e = edges_[id];
            inc_edge_[cursor[e.u]] = id;
            inc_other_[cursor[e.u]++] = e.v;
            inc_edge_[cursor[e.v]] = id;
            inc_other_[cursor[e.v]++] = e.u;
        }
    }

    void check_connected() const {
        const int n = vertex_count();
        std::vector<char> seen(n, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int reached = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            auto inc = incidence(v);
            for (int a = 0; a < inc.count; ++a) {
                int w = inc.other[a];
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    q.push(w);
                }
            }
        }
        if (reached != n)
            throw SpecError("window is disconnected (" + std::to_string(reached) + " of " +
                            std::to_string(n) + " vertices reachable)");
    }

    PeriodicGraph parent_;
    Extent extent_;
    Boundary boundary_;
    int n_locals_ = 0;
    std::int64_t n_cells_ = 0;
    std::vector<WindowEdge> edges_;
    std::vector<int> inc_off_;
    std::vector<std::int32_t> inc_edge_;
    std::vector<std::int32_t> inc_other_;
};

inline WindowGraph realize_window(const PeriodicGraph& g, Extent extent, Boundary boundary) {
    return WindowGraph(g, std::move(extent), boundary);
}

// Symmetric extent [-half, half) on every axis.
inline Extent centered_extent(int dimension, int half) {
    return Extent(dimension, AxisRange{-half, half});
}

inline Extent block_extent(int dimension, int cells) {
    return Extent(dimension, AxisRange{0, cells});
}

// BFS distances from source; -1 marks unreachable (cannot happen on a
// connected window) or beyond `limit` when limit >= 0.
inline std::vector<int> bfs_distances(const WindowGraph& w, int source, int limit = -1) {
    std::vector<int> dist(w.vertex_count(), -1);
    std::queue<int> q;
    dist[source] = 0;
    q.push(source);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (limit >= 0 && dist[v] >= limit) continue;
        auto inc = w.incidence(v);
        for (int a = 0; a < inc.count; ++a) {
            int u = inc.other[a];
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                q.push(u);
            }
        }
    }
    return dist;
}

inline int distance(const WindowGraph& w, const VertexId& u, const VertexId& v) {
    int su = w.index_of(u);
    int sv = w.index_of(v);
    if (su == sv) return 0;
    auto dist = bfs_distances(w, su);
    return dist[sv];
}

inline std::vector<int> ball(const WindowGraph& w, int center, int radius) {
    auto dist = bfs_distances(w, center, radius);
    std::vector<int> out;
    for (int v = 0; v < w.vertex_count(); ++v)
        if (dist[v] >= 0 && dist[v] <= radius) out.push_back(v);
    return out;
}

inline std::vector<int> ball(const WindowGraph& w, const VertexId& center, int radius) {
    if (radius < 0) throw SpecError("ball radius must be >= 0");
    return ball(w, w.index_of(center), radius);
}

// @A = vertices of A with a neighbor outside A.
inline std::vector<int> boundary_of(const WindowGraph& w, const std::vector<int>& a) {
    std::vector<char> in(w.vertex_count(), 0);
    for (int v : a) in[v] = 1;
    std::vector<int> out;
    for (int v : a) {
        auto inc = w.incidence(v);
        for (int k = 0; k < inc.count; ++k)
            if (!in[inc.other[k]]) {
                out.push_back(v);
                break;
            }
    }
    return out;
}

// external boundary = vertices outside A with a neighbor in A.
inline std::vector<int> ext_boundary_of(const WindowGraph& w, const std::vector<int>& a) {
    std::vector<char> in(w.vertex_count(), 0);
    for (int v : a) in[v] = 1;
    std::vector<char> picked(w.vertex_count(), 0);
    std::vector<int> out;
    for (int v : a) {
        auto inc = w.incidence(v);
        for (int k = 0; k < inc.count; ++k) {
            int u = inc.other[k];
            if (!in[u] && !picked[u]) {
                picked[u] = 1;
                out.push_back(u);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace glauberk
