#pragma once

// Post-processing of trajectory ledgers into the fixation observables:
// finite-window estimates of the active-site fraction, opposition-flip tail
// curves, the F/I/M classification, and cross-size scaling tables. A vertex
// counts as active when it records at least one accepted flip in
// [t_cut, t_max]; that is the desk-scale proxy for flipping infinitely often,
// and its t_cut sensitivity is up to the caller to report.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "glauberk/dynamics.hpp"
#include "glauberk/errors.hpp"
#include "glauberk/flipsets.hpp"
#include "glauberk/window.hpp"

namespace glauberk {

struct FixationReport {
    double t_cut = 0.0;
    double t_max = 0.0;
    std::vector<std::int32_t> ball;  // vertices averaged over
    double rho_I_hat = 0.0;
    double rho_F_hat = 1.0;
    std::vector<double> per_replica_rho;
    // per ball vertex: number of replicas in which it is active after t_cut
    std::vector<int> active_replicas;
    int n_replicas = 0;
    // tail curve over `tail_grid`: mean opposition flips per site in [t, t_max]
    std::vector<double> tail_grid;
    std::vector<double> tail_curve;
};

// Averaging region: the whole window under toroidal boundary, otherwise the
// vertices at least `shell` cells from every face.
inline std::vector<std::int32_t> default_ball(const WindowGraph& w, int shell) {
    std::vector<std::int32_t> out;
    for (int v = 0; v < w.vertex_count(); ++v)
        if (w.is_interior(v, shell)) out.push_back(v);
    return out;
}

inline FixationReport estimate_rho(const std::vector<SimResult>& results, double t_cut,
                                   std::vector<std::int32_t> ball_vertices) {
    if (results.empty()) throw SpecError("estimate_rho needs at least one replica");
    if (ball_vertices.empty()) throw SpecError("estimate_rho over an empty ball");
    const double t_max = results.front().t_end;
    if (!(t_cut < t_max)) throw SpecError("t_cut must be smaller than the horizon");

    FixationReport rep;
    rep.t_cut = t_cut;
    rep.t_max = t_max;
    rep.ball = std::move(ball_vertices);
    rep.n_replicas = static_cast<int>(results.size());
    rep.active_replicas.assign(rep.ball.size(), 0);

    for (const auto& r : results) {
        std::int64_t active = 0;
        for (size_t i = 0; i < rep.ball.size(); ++i) {
            if (r.per_vertex[rep.ball[i]].last_flip_t >= t_cut) {
                ++active;
                rep.active_replicas[i]++;
            }
        }
        rep.per_replica_rho.push_back(static_cast<double>(active) /
                                      static_cast<double>(rep.ball.size()));
    }
    rep.rho_I_hat = std::accumulate(rep.per_replica_rho.begin(), rep.per_replica_rho.end(),
                                    0.0) /
                    static_cast<double>(rep.per_replica_rho.size());
    rep.rho_F_hat = 1.0 - rep.rho_I_hat;
    return rep;
}

// Mean number of accepted opposition flips (delta > 0) per ball site in
// [t, t_max], for each grid time t. Requires event logs.
inline std::vector<double> opposition_tail(const std::vector<SimResult>& results,
                                           const FlipSetCatalog& catalog,
                                           const std::vector<std::int32_t>& ball_vertices,
                                           const std::vector<double>& grid) {
    if (results.empty()) throw SpecError("opposition_tail needs at least one replica");
    for (const auto& r : results)
        if (r.log_verbosity == LogVerbosity::None)
            throw SpecError("opposition_tail needs runs logged at verbosity >= accepted");
    std::vector<char> in_ball;
    std::vector<double> times;
    for (const auto& r : results) {
        if (in_ball.empty()) {
            in_ball.assign(r.per_vertex.size(), 0);
            for (auto v : ball_vertices) in_ball[v] = 1;
        }
        for (const auto& ev : r.event_log) {
            if (!ev.accepted || ev.delta <= 0) continue;
            for (auto x : catalog.set(ev.set_id))
                if (in_ball[x]) times.push_back(ev.t);
        }
    }
    std::sort(times.begin(), times.end());
    const double denom =
        static_cast<double>(ball_vertices.size()) * static_cast<double>(results.size());
    std::vector<double> curve;
    curve.reserve(grid.size());
    for (double t : grid) {
        auto it = std::lower_bound(times.begin(), times.end(), t);
        curve.push_back(static_cast<double>(times.end() - it) / denom);
    }
    return curve;
}

// ---- classification --------------------------------------------------------

enum class ModelType { F, I, M, Inconclusive };

inline std::string to_string(ModelType t) {
    switch (t) {
        case ModelType::F: return "F";
        case ModelType::I: return "I";
        case ModelType::M: return "M";
        default: return "inconclusive";
    }
}

struct ClassifyThresholds {
    double grey_low = 0.02;    // rho_I below this counts as zero
    double grey_high = 0.98;   // rho_I above this counts as one
    double replica_dev = 0.1;  // max std-dev across replicas for a verdict M
};

struct ClassificationVerdict {
    ModelType type = ModelType::Inconclusive;
    double rho_I_hat = 0.0;
    double rho_F_hat = 1.0;
    double replica_stddev = 0.0;
    int n_replicas = 0;
    ClassifyThresholds thresholds;
    std::string note;
};

inline ClassificationVerdict classify(const FixationReport& rep,
                                      ClassifyThresholds th = {}) {
    ClassificationVerdict v;
    v.rho_I_hat = rep.rho_I_hat;
    v.rho_F_hat = rep.rho_F_hat;
    v.n_replicas = rep.n_replicas;
    v.thresholds = th;
    double var = 0.0;
    for (double r : rep.per_replica_rho) var += (r - rep.rho_I_hat) * (r - rep.rho_I_hat);
    v.replica_stddev =
        rep.per_replica_rho.size() > 1
            ? std::sqrt(var / static_cast<double>(rep.per_replica_rho.size() - 1))
            : 0.0;
    if (rep.rho_I_hat <= th.grey_low) {
        v.type = ModelType::F;
    } else if (rep.rho_I_hat >= th.grey_high) {
        v.type = ModelType::I;
    } else if (v.replica_stddev < th.replica_dev) {
        v.type = ModelType::M;
    } else {
        v.type = ModelType::Inconclusive;
        v.note = "replica dispersion " + std::to_string(v.replica_stddev) +
                 " above bound " + std::to_string(th.replica_dev);
    }
    if (rep.n_replicas < 3 && v.note.empty())
        v.note = "fewer than 3 replicas; verdict is weakly supported";
    return v;
}

// ---- scaling study -----------------------------------------------------------

struct ScalingSpec {
    PeriodicGraph graph;
    Boundary boundary = Boundary::Toroidal;
    int k = 1;
    double alpha = 1.0;
    double gamma = 0.5;
    TemperatureProfile profile = TemperatureProfile::zero();
    double t_max = 100.0;
    int n_replicas = 3;
    std::uint64_t seed = 1;
    std::int64_t catalog_cap = FlipSetCatalog::kDefaultCap;
};

struct ScalingRow {
    int cells_per_axis = 0;
    int vertices = 0;
    double median_flips_per_site = 0.0;
    double median_last_flip = 0.0;
    double rho_I_hat = 0.0;
};

struct ScalingTable {
    std::vector<ScalingRow> rows;
    std::string flips_trend;  // "increasing" / "decreasing" / "mixed" / "flat"

    std::string to_csv() const {
        std::ostringstream os;
        os.precision(17);
        os << "L,vertices,median_flips_per_site,median_last_flip,rho_I_hat\n";
        for (const auto& r : rows)
            os << r.cells_per_axis << "," << r.vertices << "," << r.median_flips_per_site
               << "," << r.median_last_flip << "," << r.rho_I_hat << "\n";
        return os.str();
    }
};

namespace detail {
inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}
}  // namespace detail

inline ScalingTable scaling_study(const ScalingSpec& spec,
                                  const std::vector<int>& window_sizes, int threads = 1) {
    if (window_sizes.empty()) throw SpecError("scaling study needs window sizes");
    ScalingTable table;
    for (int L : window_sizes) {
        WindowGraph w(spec.graph, block_extent(spec.graph.dimension(), L), spec.boundary);
        FlipSetCatalog catalog(w, spec.k, spec.catalog_cap);
        Rng env_rng(spec.seed ^ 0xabcdef12345678ULL ^ static_cast<std::uint64_t>(L));
        Interactions J = sample_interactions(w, spec.alpha, env_rng);
        SimContext ctx{&w, &catalog, &J, &spec.profile};
        auto results = run_replicas(
            ctx,
            [&](int, std::uint64_t replica_seed) {
                Rng r(replica_seed ^ 0x5eed5eedULL);
                return sample_initial(w, spec.gamma, r);
            },
            spec.seed, spec.n_replicas, spec.t_max, DynamicsOptions{}, threads);

        std::vector<double> flips_per_site, last_flips;
        for (const auto& r : results) {
            flips_per_site.push_back(static_cast<double>(r.total_flips()) /
                                     static_cast<double>(w.vertex_count()));
            const double m = r.max_last_flip();
            last_flips.push_back(std::isfinite(m) ? m : 0.0);
        }
        auto rep = estimate_rho(results, spec.t_max / 2.0,
                                default_ball(w, spec.k + 1));
        ScalingRow row;
        row.cells_per_axis = L;
        row.vertices = w.vertex_count();
        row.median_flips_per_site = detail::median(flips_per_site);
        row.median_last_flip = detail::median(last_flips);
        row.rho_I_hat = rep.rho_I_hat;
        table.rows.push_back(row);
    }
    bool inc = true, dec = true;
    for (size_t i = 1; i < table.rows.size(); ++i) {
        if (!(table.rows[i].median_flips_per_site > table.rows[i - 1].median_flips_per_site))
            inc = false;
        if (!(table.rows[i].median_flips_per_site < table.rows[i - 1].median_flips_per_site))
            dec = false;
    }
    if (table.rows.size() < 2)
        table.flips_trend = "single-size";
    else
        table.flips_trend = inc ? "increasing" : (dec ? "decreasing" : "mixed");
    return table;
}

}  // namespace glauberk
