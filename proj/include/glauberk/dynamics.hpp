#pragma once

// Event-driven continuous-time simulator built on the graphical
// representation: the superposition of one rate-1 Poisson clock per catalog
// set is drawn as a single global exponential clock plus a uniform set choice;
// a uniform mark against the heat-bath rate decides acceptance. Draw order per
// event is fixed (waiting time, set index, mark), and the arrival overshooting
// the horizon is carried in the checkpoint so a resumed run is bit-identical
// to an uninterrupted one.

#include <array>
#include <atomic>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "glauberk/flipsets.hpp"
#include "glauberk/model.hpp"
#include "glauberk/rng.hpp"
#include "glauberk/window.hpp"

namespace glauberk {

enum class LogVerbosity { None, Accepted, All };

inline std::string to_string(LogVerbosity v) {
    switch (v) {
        case LogVerbosity::None: return "none";
        case LogVerbosity::Accepted: return "accepted";
        default: return "all";
    }
}

struct Event {
    std::int64_t seq = 0;
    double t = 0.0;
    std::int32_t set_id = 0;
    int delta = 0;
    double u = 0.0;
    bool accepted = false;
};

struct VertexLedger {
    std::int64_t n_minus = 0;  // accepted flips with delta > 0 (opposition)
    std::int64_t n_zero = 0;   // accepted flips with delta = 0 (indifferent)
    std::int64_t n_plus = 0;   // accepted flips with delta < 0 (in favour)
    std::int64_t arrivals = 0; // clock arrivals of sets containing the vertex
    double last_flip_t = -std::numeric_limits<double>::infinity();

    std::int64_t flips() const { return n_minus + n_zero + n_plus; }
};

struct EnergySample {
    double t = 0.0;
    std::int64_t H = 0;
};

struct SimResult {
    SpinState final_spins;
    double t_end = 0.0;
    std::int64_t events = 0;
    std::int64_t accepted = 0;
    std::vector<VertexLedger> per_vertex;
    std::vector<EnergySample> energy_trace;
    std::vector<Event> event_log;  // per verbosity
    LogVerbosity log_verbosity = LogVerbosity::None;
    std::int64_t final_H = 0;

    // replica metadata
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::string rng_algorithm = kRngAlgorithm;

    // checkpoint for resume
    std::array<std::uint64_t, 4> rng_state{};
    double pending_arrival = 0.0;  // first arrival past the horizon

    std::int64_t total_flips() const {
        std::int64_t n = 0;
        for (const auto& v : per_vertex) n += v.flips();
        return n;
    }

    double max_last_flip() const {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& v : per_vertex) m = std::max(m, v.last_flip_t);
        return m;
    }
};

struct DynamicsOptions {
    LogVerbosity verbosity = LogVerbosity::None;
    std::int64_t energy_stride = 0;  // sample H every N accepted flips; 0 = off
};

// Immutable per-run context: window, catalog, quenched couplings.
struct SimContext {
    const WindowGraph* window = nullptr;
    const FlipSetCatalog* catalog = nullptr;
    const Interactions* couplings = nullptr;
    const TemperatureProfile* profile = nullptr;
};

class Simulator {
public:
    Simulator(const SimContext& ctx, SpinState initial, std::uint64_t seed,
              DynamicsOptions opts = {})
        : ctx_(ctx), spins_(std::move(initial)), rng_(seed), seed_(seed), opts_(opts) {
        per_vertex_.resize(ctx_.window->vertex_count());
        H_ = window_H(*ctx_.window, *ctx_.couplings, spins_);
        // first waiting time of the global clock
        pending_ = rng_.exponential(static_cast<double>(ctx_.catalog->size()));
        if (opts_.energy_stride > 0) trace_.push_back({0.0, H_});
    }

    // Restore a checkpointed trajectory; continuing it reproduces the
    // uninterrupted run exactly.
    Simulator(const SimContext& ctx, const SimResult& checkpoint, DynamicsOptions opts = {})
        : ctx_(ctx),
          spins_(checkpoint.final_spins),
          rng_(0),
          seed_(checkpoint.seed),
          opts_(opts) {
        per_vertex_ = checkpoint.per_vertex;
        t_ = checkpoint.t_end;
        seq_ = checkpoint.events;
        accepted_ = checkpoint.accepted;
        H_ = checkpoint.final_H;
        rng_.restore(checkpoint.rng_state);
        pending_ = checkpoint.pending_arrival;
        trace_ = checkpoint.energy_trace;
        log_ = checkpoint.event_log;
    }

    void run_until(double t_max) {
        const std::int64_t n_sets = ctx_.catalog->size();
        const double total_rate = static_cast<double>(n_sets);
        const auto& w = *ctx_.window;
        const auto& J = *ctx_.couplings;
        const auto& profile = *ctx_.profile;
        while (pending_ <= t_max) {
            const double t = pending_;
            const std::int64_t id = static_cast<std::int64_t>(rng_.below(n_sets));
            const double u = rng_.uniform01();
            auto members = ctx_.catalog->set(id);
            const int delta = delta_H(w, J, spins_, members);
            const double c = rate(delta, profile, t);
            const bool accepted = u < c;
            for (std::int32_t x : members) per_vertex_[x].arrivals++;
            if (accepted) {
                apply_flip(spins_, members);
                H_ += delta;
                ++accepted_;
                for (std::int32_t x : members) {
                    auto& led = per_vertex_[x];
                    if (delta > 0)
                        led.n_minus++;
                    else if (delta < 0)
                        led.n_plus++;
                    else
                        led.n_zero++;
                    led.last_flip_t = t;
                }
                if (opts_.energy_stride > 0 && accepted_ % opts_.energy_stride == 0)
                    trace_.push_back({t, H_});
            }
            if (opts_.verbosity == LogVerbosity::All ||
                (opts_.verbosity == LogVerbosity::Accepted && accepted))
                log_.push_back({seq_, t, static_cast<std::int32_t>(id), delta, u, accepted});
            ++seq_;
            t_ = t;
            pending_ = t + rng_.exponential(total_rate);
        }
        t_ = t_max;
    }

    SimResult snapshot() const {
        SimResult r;
        r.final_spins = spins_;
        r.t_end = t_;
        r.events = seq_;
        r.accepted = accepted_;
        r.per_vertex = per_vertex_;
        r.energy_trace = trace_;
        r.event_log = log_;
        r.log_verbosity = opts_.verbosity;
        r.final_H = H_;
        r.seed = seed_;
        r.rng_state = rng_.save();
        r.pending_arrival = pending_;
        return r;
    }

    const SpinState& spins() const { return spins_; }
    double time() const { return t_; }
    std::int64_t energy() const { return H_; }

private:
    SimContext ctx_;
    SpinState spins_;
    Rng rng_;
    std::uint64_t seed_ = 0;
    DynamicsOptions opts_;
    std::vector<VertexLedger> per_vertex_;
    std::vector<EnergySample> trace_;
    std::vector<Event> log_;
    double t_ = 0.0;
    double pending_ = 0.0;
    std::int64_t seq_ = 0;
    std::int64_t accepted_ = 0;
    std::int64_t H_ = 0;
};

inline SimResult run(const SimContext& ctx, SpinState initial, std::uint64_t seed,
                     double t_max, DynamicsOptions opts = {}) {
    Simulator sim(ctx, std::move(initial), seed, opts);
    sim.run_until(t_max);
    return sim.snapshot();
}

inline SimResult resume(const SimContext& ctx, const SimResult& checkpoint,
                        double additional_horizon, DynamicsOptions opts = {}) {
    if (additional_horizon < 0) throw SpecError("resume horizon must be >= 0");
    Simulator sim(ctx, checkpoint, opts);
    sim.run_until(checkpoint.t_end + additional_horizon);
    return sim.snapshot();
}

// Independent replica trajectories. Initial spins are drawn per replica from
// gamma (or copied when fixed); couplings stay quenched across replicas only
// if the caller passes the same context. Results are indexed by replica and
// independent of the thread count.
template <typename MakeInitial>
std::vector<SimResult> run_replicas(const SimContext& ctx, MakeInitial&& make_initial,
                                    std::uint64_t seed, int n_replicas, double t_max,
                                    DynamicsOptions opts = {}, int threads = 1) {
    if (n_replicas < 1) throw SpecError("need at least one replica");
    std::vector<SimResult> out(n_replicas);
    auto work = [&](int i) {
        const std::uint64_t replica_seed =
            [&] { std::uint64_t s = static_cast<std::uint64_t>(i) + 1; return seed ^ splitmix64(s); }();
        SpinState init = make_initial(i, replica_seed);
        out[i] = run(ctx, std::move(init), replica_seed, t_max, opts);
    };
    if (threads <= 1) {
        for (int i = 0; i < n_replicas; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        int n_workers = std::min(threads, n_replicas);
        for (int t = 0; t < n_workers; ++t)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n_replicas; i = next.fetch_add(1)) work(i);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace glauberk
