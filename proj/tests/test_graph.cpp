#include <catch2/catch_amalgamated.hpp>

#include "glauberk/cellspec.hpp"
#include "glauberk/gamma.hpp"
#include "glauberk/presets.hpp"
#include "glauberk/window.hpp"

using namespace glauberk;

TEST_CASE("cubic lattices have degree 2d") {
    for (int d = 1; d <= 3; ++d) {
        auto g = build_cubic(d);
        REQUIRE(g.spec.vertex_count() == 1);
        REQUIRE(g.spec.edge_count() == d);
        REQUIRE(g.local_degree[0] == 2 * d);
        REQUIRE(g.max_degree == 2 * d);
    }
    REQUIRE_THROWS_AS(build_cubic(0), SpecError);
}

TEST_CASE("hexagonal lattice is a degree-3 bipartite 2-graph") {
    auto g = build_hexagonal();
    REQUIRE(g.spec.vertex_count() == 2);
    REQUIRE(g.spec.edge_count() == 3);
    REQUIRE(g.local_degree == std::vector<int>{3, 3});
    REQUIRE(g.max_degree == 3);

    // 2-coloring on a window certifies bipartiteness
    WindowGraph w(g, centered_extent(2, 3), Boundary::Toroidal);
    auto dist = bfs_distances(w, 0);
    for (const auto& e : w.edges()) REQUIRE((dist[e.u] + dist[e.v]) % 2 == 1);
}

TEST_CASE("cell validation rejects bad specs") {
    CellSpec s;
    s.dimension = 1;
    SECTION("empty vertex list") {
        REQUIRE_THROWS_AS(make_periodic_graph(s), SpecError);
    }
    SECTION("self loop") {
        s.cell_vertices = {{0.0}};
        s.cell_edges = {{0, 0, {0}}};
        REQUIRE_THROWS_AS(make_periodic_graph(s), SpecError);
    }
    SECTION("duplicate edge via reversal") {
        s.cell_vertices = {{0.0}, {0.5}};
        s.cell_edges = {{0, 1, {0}}, {1, 0, {0}}};
        REQUIRE_THROWS_AS(make_periodic_graph(s), SpecError);
    }
    SECTION("isolated vertex") {
        s.cell_vertices = {{0.0}, {0.5}};
        s.cell_edges = {{0, 0, {1}}};
        REQUIRE_THROWS_AS(make_periodic_graph(s), SpecError);
    }
}

TEST_CASE("cell spec text round trip and errors") {
    auto g = resolve_preset("example-m");
    REQUIRE(g.spec.vertex_count() == 5);
    REQUIRE(g.spec.edge_count() == 6);
    REQUIRE(g.local_degree == std::vector<int>{4, 2, 2, 2, 2});
    REQUIRE(g.max_degree == 4);

    auto text = serialize_cell_spec(g, "round trip");
    auto g2 = parse_cell_spec(text);
    REQUIRE(g2.spec.cell_edges == g.spec.cell_edges);
    REQUIRE(g2.local_degree == g.local_degree);

    REQUIRE_THROWS_AS(parse_cell_spec("dim 1\n"), SpecError);
    REQUIRE_THROWS_AS(parse_cell_spec("dim 1\nvertex 0 0.0\nbogus\n"), SpecError);
    REQUIRE_THROWS_WITH(parse_cell_spec("dim 1\nvertex 0 0.0\nedge 0 0 1\nedge 0 0 -1\n"),
                        Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("window realization censuses") {
    SECTION("L2 toroidal 8x8") {
        WindowGraph w(build_cubic(2), centered_extent(2, 4), Boundary::Toroidal);
        REQUIRE(w.vertex_count() == 64);
        REQUIRE(w.edge_count() == 128);
        for (int v = 0; v < w.vertex_count(); ++v) REQUIRE(w.degree(v) == 4);
    }
    SECTION("L2 free 8x8 drops boundary edges") {
        WindowGraph w(build_cubic(2), centered_extent(2, 4), Boundary::Free);
        REQUIRE(w.vertex_count() == 64);
        REQUIRE(w.edge_count() == 2 * 8 * 7);
    }
    SECTION("hexagonal toroidal 4x4 cells") {
        WindowGraph w(build_hexagonal(), centered_extent(2, 2), Boundary::Toroidal);
        REQUIRE(w.vertex_count() == 32);
        REQUIRE(w.edge_count() == 48);
        for (int v = 0; v < w.vertex_count(); ++v) REQUIRE(w.degree(v) == 3);
    }
    SECTION("2-cell torus keeps parallel wrap edges") {
        WindowGraph w(build_cubic(2), block_extent(2, 2), Boundary::Toroidal);
        REQUIRE(w.vertex_count() == 4);
        REQUIRE(w.edge_count() == 8);
        for (int v = 0; v < w.vertex_count(); ++v) REQUIRE(w.degree(v) == 4);
    }
    SECTION("zero extent is rejected") {
        REQUIRE_THROWS_AS(WindowGraph(build_cubic(1), Extent{{0, 0}}, Boundary::Free),
                          SpecError);
    }
}

TEST_CASE("distances and balls") {
    WindowGraph w(build_cubic(2), centered_extent(2, 8), Boundary::Toroidal);
    VertexId o{{0, 0}, 0};
    REQUIRE(distance(w, o, o) == 0);
    REQUIRE(distance(w, o, VertexId{{1, 0}, 0}) == 1);
    REQUIRE(distance(w, o, VertexId{{3, -2}, 0}) == 5);
    REQUIRE(ball(w, o, 0) == std::vector<int>{w.index_of(o)});
    REQUIRE(ball(w, o, 1).size() == 5);
    REQUIRE(ball(w, o, 2).size() == 13);

    // symmetry and triangle inequality on a sample of pairs
    VertexId a{{2, 1}, 0}, b{{-1, 3}, 0};
    int dab = distance(w, a, b);
    REQUIRE(dab == distance(w, b, a));
    REQUIRE(distance(w, o, b) <= distance(w, o, a) + dab);

    REQUIRE_THROWS_AS(w.index_of(VertexId{{100, 0}, 0}), SpecError);
}

TEST_CASE("boundary operators") {
    WindowGraph w(build_cubic(2), centered_extent(2, 4), Boundary::Toroidal);
    SECTION("whole window has empty boundary") {
        std::vector<int> all(w.vertex_count());
        for (int v = 0; v < w.vertex_count(); ++v) all[v] = v;
        REQUIRE(boundary_of(w, all).empty());
        REQUIRE(ext_boundary_of(w, all).empty());
    }
    SECTION("singleton") {
        int v = w.index_of(VertexId{{0, 0}, 0});
        REQUIRE(boundary_of(w, {v}) == std::vector<int>{v});
        REQUIRE(ext_boundary_of(w, {v}).size() == 4);
    }
    SECTION("2x2 square") {
        std::vector<int> square = {
            w.index_of(VertexId{{0, 0}, 0}), w.index_of(VertexId{{1, 0}, 0}),
            w.index_of(VertexId{{0, 1}, 0}), w.index_of(VertexId{{1, 1}, 0})};
        auto b = boundary_of(w, square);
        std::sort(b.begin(), b.end());
        auto sq = square;
        std::sort(sq.begin(), sq.end());
        REQUIRE(b == sq);
        REQUIRE(ext_boundary_of(w, square).size() == 8);
    }
    SECTION("boundary and external boundary are disjoint") {
        std::vector<int> a = {w.index_of(VertexId{{0, 0}, 0}),
                              w.index_of(VertexId{{1, 0}, 0})};
        auto in_b = boundary_of(w, a);
        auto out_b = ext_boundary_of(w, a);
        for (int v : in_b)
            REQUIRE(std::find(out_b.begin(), out_b.end(), v) == out_b.end());
    }
}

TEST_CASE("gamma construction censuses and distances") {
    SECTION("gamma(3,3) of L2") {
        auto gb = build_gamma(build_cubic(2), 3, 3);
        REQUIRE(gb.graph.spec.vertex_count() == 29);
        REQUIRE(gb.graph.spec.edge_count() == 36);

        WindowGraph w(gb.graph, centered_extent(2, 2), Boundary::Toroidal);
        REQUIRE(distance(w, VertexId{{0, 0}, 0}, VertexId{{1, 0}, 0}) == 9);
        REQUIRE(distance(w, VertexId{{0, 0}, 0}, VertexId{{0, 1}, 0}) == 9);
    }
    SECTION("gamma(2,1) of L1 is a chain of 4-cycles") {
        auto gb = build_gamma(build_cubic(1), 2, 1);
        REQUIRE(gb.graph.spec.vertex_count() == 3);
        REQUIRE(gb.graph.spec.edge_count() == 4);
        WindowGraph w(gb.graph, block_extent(1, 4), Boundary::Toroidal);
        REQUIRE(distance(w, VertexId{{0}, 0}, VertexId{{1}, 0}) == 2);
    }
    SECTION("common vertices sit exactly ell apart, bipartiteness survives") {
        for (auto [ell, m] : {std::pair{2, 1}, {2, 3}, {3, 3}, {4, 2}}) {
            auto gb = build_gamma(build_cubic(2), ell, m);
            WindowGraph w(gb.graph, centered_extent(2, 2), Boundary::Toroidal);
            // minimum pairwise distance among common vertices in one cell and
            // its neighbors
            int min_d = 1 << 20;
            std::vector<int> commons;
            for (int local : gb.common_locals) {
                commons.push_back(w.index_of(VertexId{{0, 0}, local}));
                commons.push_back(w.index_of(VertexId{{1, 0}, local}));
            }
            for (size_t i = 0; i < commons.size(); ++i) {
                auto dist = bfs_distances(w, commons[i]);
                for (size_t j = 0; j < commons.size(); ++j)
                    if (commons[i] != commons[j]) min_d = std::min(min_d, dist[commons[j]]);
            }
            REQUIRE(min_d == ell);

            auto dist = bfs_distances(w, 0);
            for (const auto& e : w.edges()) REQUIRE((dist[e.u] + dist[e.v]) % 2 == 1);
        }
    }
    SECTION("parameter validation") {
        REQUIRE_THROWS_AS(build_gamma(build_cubic(2), 1, 3), SpecError);
        REQUIRE_THROWS_AS(build_gamma(build_cubic(2), 2, 0), SpecError);
    }
}
