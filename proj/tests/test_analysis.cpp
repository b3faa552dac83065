#include <catch2/catch_amalgamated.hpp>

#include "glauberk/analysis.hpp"
#include "glauberk/presets.hpp"
#include "support.hpp"

using namespace glauberk;

namespace {
SimResult synthetic_result(int n_vertices, double t_end,
                           const std::map<int, double>& last_flips) {
    SimResult r;
    r.t_end = t_end;
    r.per_vertex.resize(n_vertices);
    r.final_spins.assign(n_vertices, 1);
    for (auto& [v, t] : last_flips) {
        r.per_vertex[v].last_flip_t = t;
        r.per_vertex[v].n_plus = 1;
    }
    return r;
}
}  // namespace

TEST_CASE("estimate_rho on synthetic ledgers") {
    std::vector<std::int32_t> ball{0, 1, 2, 3};
    SECTION("no activity after t_cut") {
        auto r = synthetic_result(4, 100.0, {{0, 10.0}, {1, 20.0}});
        auto rep = estimate_rho({r}, 50.0, ball);
        REQUIRE(rep.rho_I_hat == 0.0);
        REQUIRE(rep.rho_F_hat == 1.0);
    }
    SECTION("every vertex active") {
        auto r = synthetic_result(4, 100.0, {{0, 90.0}, {1, 90.0}, {2, 60.0}, {3, 99.0}});
        auto rep = estimate_rho({r}, 50.0, ball);
        REQUIRE(rep.rho_I_hat == 1.0);
        REQUIRE(rep.rho_F_hat == 0.0);
    }
    SECTION("fractions average over replicas and stay complementary") {
        auto a = synthetic_result(4, 100.0, {{0, 80.0}});
        auto b = synthetic_result(4, 100.0, {{0, 80.0}, {1, 80.0}});
        auto rep = estimate_rho({a, b}, 50.0, ball);
        REQUIRE_THAT(rep.rho_I_hat, Catch::Matchers::WithinAbs(0.375, 1e-12));
        REQUIRE(rep.rho_I_hat + rep.rho_F_hat == 1.0);
        REQUIRE(rep.per_replica_rho.size() == 2);
    }
    SECTION("rho is nonincreasing in t_cut") {
        auto r = synthetic_result(4, 100.0, {{0, 10.0}, {1, 55.0}, {2, 90.0}});
        double prev = 1.0;
        for (double cut : {1.0, 30.0, 70.0, 95.0}) {
            auto rep = estimate_rho({r}, cut, ball);
            REQUIRE(rep.rho_I_hat <= prev);
            prev = rep.rho_I_hat;
        }
    }
    SECTION("errors") {
        auto r = synthetic_result(4, 100.0, {});
        REQUIRE_THROWS_AS(estimate_rho({r}, 100.0, ball), SpecError);
        REQUIRE_THROWS_AS(estimate_rho({r}, 50.0, {}), SpecError);
    }
}

TEST_CASE("classification verdicts") {
    std::vector<std::int32_t> ball{0, 1, 2, 3};
    SECTION("exact zero is F, exact one is I") {
        auto f = classify(estimate_rho({synthetic_result(4, 100.0, {})}, 50.0, ball));
        REQUIRE(f.type == ModelType::F);
        auto i = classify(estimate_rho(
            {synthetic_result(4, 100.0,
                              {{0, 99.0}, {1, 99.0}, {2, 99.0}, {3, 99.0}})},
            50.0, ball));
        REQUIRE(i.type == ModelType::I);
    }
    SECTION("mixed fraction with tight replicas is M") {
        std::vector<SimResult> rs;
        for (int rep = 0; rep < 4; ++rep)
            rs.push_back(synthetic_result(4, 100.0, {{0, 90.0}, {1, 90.0}}));
        auto v = classify(estimate_rho(rs, 50.0, ball));
        REQUIRE(v.type == ModelType::M);
        REQUIRE(v.replica_stddev == 0.0);
    }
    SECTION("dispersed replicas are inconclusive") {
        std::vector<SimResult> rs;
        rs.push_back(synthetic_result(4, 100.0, {}));
        rs.push_back(synthetic_result(4, 100.0,
                                      {{0, 90.0}, {1, 90.0}, {2, 90.0}}));
        rs.push_back(synthetic_result(4, 100.0, {{0, 90.0}}));
        auto v = classify(estimate_rho(rs, 50.0, ball));
        REQUIRE(v.type == ModelType::Inconclusive);
    }
    SECTION("verdict is invariant under replica reordering") {
        std::vector<SimResult> rs;
        rs.push_back(synthetic_result(4, 100.0, {{0, 90.0}}));
        rs.push_back(synthetic_result(4, 100.0, {{0, 90.0}, {1, 90.0}}));
        rs.push_back(synthetic_result(4, 100.0, {{0, 90.0}, {2, 90.0}}));
        auto v1 = classify(estimate_rho(rs, 50.0, ball));
        std::reverse(rs.begin(), rs.end());
        auto v2 = classify(estimate_rho(rs, 50.0, ball));
        REQUIRE(v1.type == v2.type);
        REQUIRE(v1.rho_I_hat == v2.rho_I_hat);
    }
}

TEST_CASE("opposition tail") {
    auto g = build_cubic(2);
    WindowGraph w(g, centered_extent(2, 4), Boundary::Toroidal);
    FlipSetCatalog cat(w, 1);
    auto J = testsupport::all_couplings(w, 1);
    auto ball_all = default_ball(w, 0);

    SECTION("zero profile gives an identically zero curve") {
        auto T = TemperatureProfile::zero();
        SimContext ctx{&w, &cat, &J, &T};
        Rng ir(2);
        auto res = run(ctx, sample_initial(w, 0.5, ir), 3, 50.0, {LogVerbosity::Accepted, 0});
        auto curve = opposition_tail({res}, cat, ball_all, {0.0, 10.0, 25.0, 49.0});
        for (double c : curve) REQUIRE(c == 0.0);
    }
    SECTION("hot constant profile accumulates linearly in remaining time") {
        auto T = TemperatureProfile::constant(100.0);
        SimContext ctx{&w, &cat, &J, &T};
        Rng ir(8);
        auto res = run(ctx, sample_initial(w, 0.5, ir), 5, 200.0, {LogVerbosity::Accepted, 0});
        std::vector<double> grid{0.0, 50.0, 100.0, 150.0};
        auto curve = opposition_tail({res}, cat, ball_all, grid);
        REQUIRE(curve[0] > 0.0);
        // nonincreasing and roughly proportional to t_max - t
        for (size_t i = 1; i < curve.size(); ++i) REQUIRE(curve[i] <= curve[i - 1]);
        double slope0 = curve[0] / 200.0;
        double slope_mid = (curve[1] - curve[3]) / 100.0;
        REQUIRE_THAT(slope_mid / slope0, Catch::Matchers::WithinAbs(1.0, 0.15));
    }
    SECTION("verbosity none is rejected") {
        auto T = TemperatureProfile::constant(1.0);
        SimContext ctx{&w, &cat, &J, &T};
        Rng ir(8);
        auto res = run(ctx, sample_initial(w, 0.5, ir), 5, 10.0, {LogVerbosity::None, 0});
        REQUIRE_THROWS_AS(opposition_tail({res}, cat, ball_all, {0.0}), SpecError);
    }
}

TEST_CASE("default ball excludes a boundary shell under free boundary") {
    WindowGraph w(build_cubic(2), centered_extent(2, 4), Boundary::Free);
    auto interior = default_ball(w, 2);
    REQUIRE(interior.size() == 16);  // 8x8 grid minus a 2-cell shell
    WindowGraph wt(build_cubic(2), centered_extent(2, 4), Boundary::Toroidal);
    REQUIRE(default_ball(wt, 2).size() == 64);
}

TEST_CASE("scaling study produces a table with trends") {
    ScalingSpec spec;
    spec.graph = build_hexagonal();
    spec.boundary = Boundary::Toroidal;
    spec.k = 1;
    spec.alpha = 1.0;
    spec.gamma = 0.5;
    spec.profile = TemperatureProfile::zero();
    spec.t_max = 40.0;
    spec.n_replicas = 3;
    spec.seed = 12;
    SECTION("single size row has no trend") {
        auto t = scaling_study(spec, {4});
        REQUIRE(t.rows.size() == 1);
        REQUIRE(t.flips_trend == "single-size");
    }
    SECTION("two sizes") {
        auto t = scaling_study(spec, {4, 8}, 2);
        REQUIRE(t.rows.size() == 2);
        REQUIRE(t.rows[0].vertices == 32);
        REQUIRE(t.rows[1].vertices == 128);
        // hexagonal zero-temperature runs absorb: bounded flips per site
        REQUIRE(t.rows[1].median_flips_per_site < 3.0);
        auto csv = t.to_csv();
        REQUIRE_THAT(csv, Catch::Matchers::ContainsSubstring("median_flips_per_site"));
    }
    SECTION("empty size list is rejected") {
        REQUIRE_THROWS_AS(scaling_study(spec, {}), SpecError);
    }
}
