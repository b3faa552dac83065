#pragma once

// Enumeration of the flip-set family: all connected vertex sets of size <= k
// inside a window, each generated exactly once by rooted growth from its
// minimum vertex (ESU-style extension with exclusive neighborhoods). Sets are
// stored in one CSR arena together with a per-vertex index.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "glauberk/errors.hpp"
#include "glauberk/window.hpp"

namespace glauberk {

class FlipSetCatalog {
public:
    FlipSetCatalog(const WindowGraph& w, int k,
                   std::int64_t hard_cap = kDefaultCap)
        : k_(k) {
        if (k < 1) throw SpecError("flip-set size bound k must be >= 1");
        // counting pass, so the size is known before any allocation
        std::int64_t n_sets = 0, n_members = 0;
        enumerate(w, [&](std::span<const std::int32_t> s) {
            ++n_sets;
            n_members += static_cast<std::int64_t>(s.size());
        });
        if (n_sets > hard_cap)
            throw CapError("flip-set catalog of " + std::to_string(n_sets) +
                           " sets exceeds cap " + std::to_string(hard_cap));
        set_off_.reserve(n_sets + 1);
        members_.reserve(n_members);
        set_off_.push_back(0);
        std::vector<std::int32_t> sorted;
        enumerate(w, [&](std::span<const std::int32_t> s) {
            sorted.assign(s.begin(), s.end());
            std::sort(sorted.begin(), sorted.end());
            members_.insert(members_.end(), sorted.begin(), sorted.end());
            set_off_.push_back(static_cast<std::int32_t>(members_.size()));
        });
        build_vertex_index(w.vertex_count());
    }

    static constexpr std::int64_t kDefaultCap = std::int64_t{1} << 26;

    int k() const { return k_; }
    std::int64_t size() const { return static_cast<std::int64_t>(set_off_.size()) - 1; }

    std::span<const std::int32_t> set(std::int64_t id) const {
        return {members_.data() + set_off_[id],
                static_cast<size_t>(set_off_[id + 1] - set_off_[id])};
    }

    int set_size(std::int64_t id) const { return set_off_[id + 1] - set_off_[id]; }

    bool contains(std::int64_t id, std::int32_t vertex) const {
        auto s = set(id);
        return std::binary_search(s.begin(), s.end(), vertex);
    }

    // ids of sets containing the vertex; K_x is its count
    std::span<const std::int32_t> sets_through(std::int32_t vertex) const {
        return {vtx_sets_.data() + vtx_off_[vertex],
                static_cast<size_t>(vtx_off_[vertex + 1] - vtx_off_[vertex])};
    }

    int count_through(std::int32_t vertex) const {
        return vtx_off_[vertex + 1] - vtx_off_[vertex];
    }

private:
    template <typename Fn>
    void enumerate(const WindowGraph& w, Fn&& emit) const {
        const int n = w.vertex_count();
        std::vector<std::int32_t> set_buf;
        std::vector<std::int32_t> ext_buf;   // shared stack of extension vertices
        std::vector<int> blocked(n, -1);     // epoch-marked S and N(S) per root
        int epoch = 0;
        std::int32_t root = 0;

        std::function<void(const std::int32_t*, int)> grow =
            [&](const std::int32_t* ext, int ext_count) {
                emit(std::span<const std::int32_t>(set_buf.data(), set_buf.size()));
                if (static_cast<int>(set_buf.size()) == k_) return;
                for (int pick = 0; pick < ext_count; ++pick) {
                    std::int32_t v = ext[pick];
                    set_buf.push_back(v);
                    // extension for the child: remaining ext after v, plus
                    // fresh neighbors of v (exclusive neighborhood, > root)
                    size_t base = ext_buf.size();
                    for (int t = pick + 1; t < ext_count; ++t) ext_buf.push_back(ext[t]);
                    auto inc = w.incidence(v);
                    size_t fresh = ext_buf.size();
                    for (int a = 0; a < inc.count; ++a) {
                        std::int32_t u = inc.other[a];
                        if (u <= root || blocked[u] == epoch) continue;
                        blocked[u] = epoch;
                        ext_buf.push_back(u);
                    }
                    std::sort(ext_buf.begin() + fresh, ext_buf.end());
                    grow(ext_buf.data() + base, static_cast<int>(ext_buf.size() - base));
                    // unblock only the fresh vertices; ext entries stay blocked
                    for (size_t t = fresh; t < ext_buf.size(); ++t) blocked[ext_buf[t]] = -1;
                    ext_buf.resize(base);
                    set_buf.pop_back();
                    // v stays blocked: sets using it are generated in its own branch
                }
            };

        std::vector<std::int32_t> root_ext;
        for (root = 0; root < n; ++root) {
            ++epoch;
            set_buf.assign(1, root);
            root_ext.clear();
            blocked[root] = epoch;
            auto inc = w.incidence(root);
            for (int a = 0; a < inc.count; ++a) {
                std::int32_t u = inc.other[a];
                if (u <= root || blocked[u] == epoch) continue;
                blocked[u] = epoch;
                root_ext.push_back(u);
            }
            std::sort(root_ext.begin(), root_ext.end());
            grow(root_ext.data(), static_cast<int>(root_ext.size()));
        }
    }

    void build_vertex_index(int n_vertices) {
        vtx_off_.assign(n_vertices + 1, 0);
        for (std::int64_t id = 0; id < size(); ++id)
            for (std::int32_t v : set(id)) vtx_off_[v + 1]++;
        std::partial_sum(vtx_off_.begin(), vtx_off_.end(), vtx_off_.begin());
        vtx_sets_.resize(members_.size());
        std::vector<std::int32_t> cursor(vtx_off_.begin(), vtx_off_.end() - 1);
        for (std::int64_t id = 0; id < size(); ++id)
            for (std::int32_t v : set(id))
                vtx_sets_[cursor[v]++] = static_cast<std::int32_t>(id);
    }

    int k_;
    std::vector<std::int32_t> set_off_;
    std::vector<std::int32_t> members_;
    std::vector<std::int32_t> vtx_off_;
    std::vector<std::int32_t> vtx_sets_;
};

inline FlipSetCatalog enumerate_flip_sets(const WindowGraph& w, int k,
                                          std::int64_t cap = FlipSetCatalog::kDefaultCap) {
    return FlipSetCatalog(w, k, cap);
}

}  // namespace glauberk
