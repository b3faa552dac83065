// glauberk: event-driven simulator and combinatorial toolkit for +/-J spin
// dynamics with k-spin flip sets on periodic graphs.
//
// Exit codes: 0 ok, 1 partial sweep failure, 2 bad arguments, 3 spec errors,
// 4 catalog cap, 5 I/O errors, 6 insufficient input verbosity, 7 absence cap.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "glauberk/absence.hpp"
#include "glauberk/analysis.hpp"
#include "glauberk/dynamics.hpp"
#include "glauberk/gamma.hpp"
#include "glauberk/io.hpp"
#include "glauberk/presets.hpp"
#include "glauberk/stability.hpp"

namespace fs = std::filesystem;
using namespace glauberk;

namespace {

int thread_count(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("GLAUBERK_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::string artifact_name(const std::string& base, const std::string& ext, int replica,
                          int n_replicas) {
    if (n_replicas == 1) return base + ext;
    return base + "_" + std::to_string(replica) + ext;
}

struct SimulateOutcome {
    Manifest manifest;
    std::vector<SimResult> results;
    std::unique_ptr<RunSetup> setup;
};

SimulateOutcome execute_run(RunConfig config, int threads, const std::string& out_dir) {
    SimulateOutcome out;
    auto start = std::chrono::steady_clock::now();
    out.setup = std::make_unique<RunSetup>(resolve_run(std::move(config)));
    auto& setup = *out.setup;
    out.results = setup.run_all(threads);
    out.manifest.config = setup.config;
    out.manifest.catalog_size = setup.catalog->size();
    for (int i = 0; i < setup.config.replicas; ++i)
        out.manifest.replica_seeds.push_back(replica_seed_of(setup.config.seed, i));

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const int n = setup.config.replicas;
        for (int i = 0; i < n; ++i) {
            const auto& r = out.results[i];
            auto sname = artifact_name("summary", ".csv", i, n);
            write_file(out_dir + "/" + sname, summary_csv(*setup.window, r));
            out.manifest.artifacts["summary_" + std::to_string(i)] = sname;
            if (r.log_verbosity != LogVerbosity::None) {
                auto ename = artifact_name("events", ".jsonl", i, n);
                write_file(out_dir + "/" + ename,
                           events_jsonl(*setup.window, *setup.catalog, r));
                out.manifest.artifacts["events_" + std::to_string(i)] = ename;
            }
            if (!r.energy_trace.empty()) {
                auto tname = artifact_name("energy", ".csv", i, n);
                write_file(out_dir + "/" + tname, energy_csv(*setup.window, r));
                out.manifest.artifacts["energy_" + std::to_string(i)] = tname;
            }
        }
        out.manifest.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_file(out_dir + "/manifest.json", out.manifest.to_json().dump(2) + "\n");
    }
    return out;
}

// results reloaded from an output directory for classification
struct LoadedRun {
    std::unique_ptr<RunSetup> setup;
    std::vector<SimResult> results;
};

double parse_last_flip(const std::string& tok) {
    if (tok == "never") return -std::numeric_limits<double>::infinity();
    return std::stod(tok);
}

LoadedRun load_run_dir(const std::string& dir) {
    LoadedRun lr;
    auto manifest = Manifest::from_json(nlohmann::json::parse(read_file(dir + "/manifest.json")));
    lr.setup = std::make_unique<RunSetup>(resolve_run(manifest.config));
    const auto& w = *lr.setup->window;
    const int n = manifest.config.replicas;
    for (int i = 0; i < n; ++i) {
        SimResult r;
        r.t_end = manifest.config.tmax;
        r.per_vertex.resize(w.vertex_count());
        r.final_spins.assign(w.vertex_count(), 1);
        auto it = manifest.artifacts.find("summary_" + std::to_string(i));
        if (it == manifest.artifacts.end()) throw IoError("manifest lists no summary for replica");
        std::istringstream csv(read_file(dir + "/" + it->second));
        std::string line;
        std::getline(csv, line);  // header
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cols;
            std::istringstream ls(line);
            std::string c;
            while (std::getline(ls, c, ',')) cols.push_back(c);
            if (cols.size() != 8) throw IoError("bad summary row: " + line);
            VertexId vid;
            std::istringstream cs(cols[0]);
            std::string z;
            while (std::getline(cs, z, ';')) vid.cell.push_back(std::stoi(z));
            vid.local = std::stoi(cols[1]);
            int v = w.index_of(vid);
            r.per_vertex[v].n_minus = std::stoll(cols[2]);
            r.per_vertex[v].n_zero = std::stoll(cols[3]);
            r.per_vertex[v].n_plus = std::stoll(cols[4]);
            r.per_vertex[v].arrivals = std::stoll(cols[5]);
            r.per_vertex[v].last_flip_t = parse_last_flip(cols[6]);
            r.final_spins[v] = static_cast<std::int8_t>(std::stoi(cols[7]));
        }
        auto ev = manifest.artifacts.find("events_" + std::to_string(i));
        if (ev != manifest.artifacts.end()) {
            r.log_verbosity = manifest.config.verbosity == "all" ? LogVerbosity::All
                                                                 : LogVerbosity::Accepted;
            std::istringstream jl(read_file(dir + "/" + ev->second));
            while (std::getline(jl, line)) {
                if (line.empty()) continue;
                auto j = nlohmann::json::parse(line);
                Event e;
                e.seq = j.at("seq").get<std::int64_t>();
                e.t = j.at("t").get<double>();
                e.set_id = j.at("set_id").get<std::int32_t>();
                e.delta = j.at("delta").get<int>();
                e.u = j.at("u").get<double>();
                e.accepted = j.at("accepted").get<bool>();
                r.event_log.push_back(e);
            }
        }
        lr.results.push_back(std::move(r));
    }
    return lr;
}

nlohmann::json verdict_json(const ClassificationVerdict& v, const FixationReport& rep) {
    nlohmann::json j;
    j["verdict"] = to_string(v.type);
    j["rho_I_hat"] = v.rho_I_hat;
    j["rho_F_hat"] = v.rho_F_hat;
    j["replica_stddev"] = v.replica_stddev;
    j["n_replicas"] = v.n_replicas;
    j["t_cut"] = rep.t_cut;
    j["t_max"] = rep.t_max;
    j["ball_size"] = rep.ball.size();
    j["per_replica_rho"] = rep.per_replica_rho;
    j["thresholds"] = {{"grey_low", v.thresholds.grey_low},
                       {"grey_high", v.thresholds.grey_high},
                       {"replica_dev", v.thresholds.replica_dev}};
    if (!v.note.empty()) j["note"] = v.note;
    if (!rep.tail_grid.empty()) {
        j["tail_grid"] = rep.tail_grid;
        j["tail_curve"] = rep.tail_curve;
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-driven k-spin Glauber dynamics on periodic graphs"};
    app.set_version_flag("--version", std::string("glauberk ") + kToolVersion);
    int threads_flag = 0;
    app.add_option("--threads", threads_flag, "worker threads (default: GLAUBERK_THREADS or all cores)");
    app.require_subcommand(1);

    // ---- graph ----------------------------------------------------------
    auto* graph_cmd = app.add_subcommand("graph", "build, inspect and certify graphs");
    graph_cmd->require_subcommand(1);
    std::string g_preset = "cubic2", g_spec_path, g_out, g_extent = "4", g_boundary = "toroidal",
                g_base = "cubic2";
    int g_k = 1, g_ell = 2, g_m = 1;

    auto add_graph_opts = [&](CLI::App* c) {
        c->add_option("--preset", g_preset,
                      "cubic1|cubic2|cubic3|cubicN|hex|example-m|gamma");
        c->add_option("--spec", g_spec_path, "cell-spec file");
        c->add_option("--base", g_base, "base preset for gamma");
        c->add_option("--ell", g_ell, "gamma cycle half-length");
        c->add_option("--m", g_m, "gamma cycles per edge");
    };
    auto resolve_graph_arg = [&]() -> PeriodicGraph {
        if (!g_spec_path.empty()) return parse_cell_spec(read_file(g_spec_path));
        if (g_preset == "gamma")
            return build_gamma(resolve_preset(g_base), g_ell, g_m).graph;
        return resolve_preset(g_preset);
    };

    auto* g_build = graph_cmd->add_subcommand("build", "write a cell-spec file");
    add_graph_opts(g_build);
    g_build->add_option("--out", g_out, "output file (default stdout)");

    auto* g_info = graph_cmd->add_subcommand("info", "print cell census and degrees");
    add_graph_opts(g_info);

    auto* g_export = graph_cmd->add_subcommand("export", "write a window edge list");
    add_graph_opts(g_export);
    g_export->add_option("--extent", g_extent, "cells per axis or lo:hi x ...");
    g_export->add_option("--boundary", g_boundary, "toroidal|free");
    g_export->add_option("--out", g_out, "output file (default stdout)");

    auto* g_stab = graph_cmd->add_subcommand("stability", "decide k-stability");
    add_graph_opts(g_stab);
    g_stab->add_option("--k", g_k, "flip-set size bound");

    // ---- simulate --------------------------------------------------------
    auto* sim_cmd = app.add_subcommand("simulate", "run trajectories");
    std::string s_config, s_manifest, s_out;
    RunConfig scfg;
    std::string s_couplings, s_spins;
    bool s_has_alpha = false, s_has_gamma = false;
    double s_alpha = 0, s_gamma = 0;
    sim_cmd->add_option("--config", s_config, "key=value configuration file");
    sim_cmd->add_option("--manifest", s_manifest, "re-run a recorded manifest");
    sim_cmd->add_option("--preset,--graph", scfg.graph, "graph preset or file:PATH");
    sim_cmd->add_option("--extent", scfg.extent, "window extent");
    sim_cmd->add_option("--boundary", scfg.boundary, "toroidal|free");
    sim_cmd->add_option("--k", scfg.k, "flip-set size bound");
    sim_cmd->add_option("--alpha", s_alpha, "coupling Bernoulli parameter")
        ->check(CLI::Range(0.0, 1.0));
    sim_cmd->add_option("--gamma", s_gamma, "initial-spin Bernoulli parameter")
        ->check(CLI::Range(0.0, 1.0));
    sim_cmd->add_option("--couplings", s_couplings, "fixed coupling assignment file");
    sim_cmd->add_option("--spins", s_spins, "fixed initial spin file");
    sim_cmd->add_option("--temp", scfg.temp, "zero|const:T|logdecay:c[,t0]|table:...");
    sim_cmd->add_option("--tmax", scfg.tmax, "time horizon");
    sim_cmd->add_option("--seed", scfg.seed, "master seed");
    sim_cmd->add_option("--replicas", scfg.replicas, "independent replicas");
    sim_cmd->add_option("--verbosity", scfg.verbosity, "none|accepted|all");
    sim_cmd->add_option("--trace-stride", scfg.trace_stride, "energy samples every N accepted flips");
    sim_cmd->add_option("--cap", scfg.cap, "catalog hard cap");
    sim_cmd->add_option("--out", s_out, "output directory");

    // ---- classify --------------------------------------------------------
    auto* cls_cmd = app.add_subcommand("classify", "estimate fixation fractions");
    std::vector<std::string> c_from;
    std::string c_config, c_out;
    double c_tcut = -1.0;
    int c_shell = -1;
    bool c_tail = false;
    cls_cmd->add_option("--from", c_from, "run output directories")->delimiter(',');
    cls_cmd->add_option("--config", c_config, "simulate-and-classify configuration file");
    cls_cmd->add_option("--t-cut", c_tcut, "activity cut (default tmax/2)");
    cls_cmd->add_option("--shell", c_shell, "boundary shell width (default k+1)");
    cls_cmd->add_flag("--tail", c_tail, "compute the opposition tail curve");
    cls_cmd->add_option("--out", c_out, "output directory for report.json");

    // ---- absence ---------------------------------------------------------
    auto* abs_cmd = app.add_subcommand("absence", "k-absence certification");
    std::string a_preset = "example-m", a_spec, a_extent = "-1:4", a_boundary = "free";
    std::string a_couplings, a_region, a_sigma, a_witness_out;
    int a_k = 1, a_k2 = 0, a_cap = kAbsenceCap;
    abs_cmd->add_option("--preset", a_preset, "graph preset");
    abs_cmd->add_option("--spec", a_spec, "cell-spec file");
    abs_cmd->add_option("--extent", a_extent, "window extent");
    abs_cmd->add_option("--boundary", a_boundary, "toroidal|free");
    abs_cmd->add_option("--couplings", a_couplings, "coupling assignment file")->required();
    abs_cmd->add_option("--region", a_region, "region + constraints file")->required();
    abs_cmd->add_option("--sigma", a_sigma, "explicit sigma_C spin file (single check)");
    abs_cmd->add_option("--k", a_k, "flip-set size bound");
    abs_cmd->add_option("--monotone", a_k2, "also verify k-absent => k2-absent");
    abs_cmd->add_option("--cap", a_cap, "region size cap");
    abs_cmd->add_option("--witness", a_witness_out, "write witness JSON here");

    // ---- sweep -----------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter grid");
    std::string w_grid, w_out = "sweep_out";
    sweep_cmd->add_option("--grid", w_grid, "grid file")->required();
    sweep_cmd->add_option("--out", w_out, "output directory");

    CLI11_PARSE(app, argc, argv);
    const int threads = thread_count(threads_flag);

    try {
        // ---- graph -------------------------------------------------------
        if (g_build->parsed()) {
            auto g = resolve_graph_arg();
            std::string comment = "generated by glauberk graph build";
            auto text = serialize_cell_spec(g, comment);
            if (g_out.empty()) std::cout << text;
            else write_file(g_out, text);
            return 0;
        }
        if (g_info->parsed()) {
            auto g = resolve_graph_arg();
            std::cout << "dimension: " << g.dimension() << "\n";
            std::cout << "cell vertices: " << g.spec.vertex_count() << "\n";
            std::cout << "cell edge templates: " << g.spec.edge_count() << "\n";
            std::cout << "max degree d_G: " << g.max_degree << "\n";
            for (int v = 0; v < g.spec.vertex_count(); ++v)
                std::cout << "  local " << v << ": degree " << g.local_degree[v] << "\n";
            return 0;
        }
        if (g_export->parsed()) {
            auto g = resolve_graph_arg();
            WindowGraph w(g, parse_extent(g_extent, g.dimension()),
                          g_boundary == "free" ? Boundary::Free : Boundary::Toroidal);
            auto text = window_edge_list(w);
            if (g_out.empty()) std::cout << text;
            else write_file(g_out, text);
            std::cerr << "window: " << w.vertex_count() << " vertices, " << w.edge_count()
                      << " edges\n";
            return 0;
        }
        if (g_stab->parsed()) {
            auto g = resolve_graph_arg();
            auto res = check_k_stable(g, g_k);
            if (res.stable)
                std::cout << "stable, witness local=" << *res.witness_local << "\n";
            else
                std::cout << "not stable: " << res.reason << "\n";
            return 0;
        }

        // ---- simulate ----------------------------------------------------
        if (sim_cmd->parsed()) {
            RunConfig config;
            if (!s_manifest.empty()) {
                auto m = Manifest::from_json(nlohmann::json::parse(read_file(s_manifest)));
                config = m.config;
            } else {
                if (!s_config.empty()) config = parse_config_text(read_file(s_config));
                // flags win over the file
                auto def = RunConfig{};
                if (sim_cmd->count("--preset") || sim_cmd->count("--graph")) config.graph = scfg.graph;
                if (sim_cmd->count("--extent")) config.extent = scfg.extent;
                if (sim_cmd->count("--boundary")) config.boundary = scfg.boundary;
                if (sim_cmd->count("--k")) config.k = scfg.k;
                s_has_alpha = sim_cmd->count("--alpha") > 0;
                s_has_gamma = sim_cmd->count("--gamma") > 0;
                if (s_has_alpha) { config.alpha = s_alpha; config.couplings_text.clear(); }
                if (!s_couplings.empty()) { config.couplings_text = read_file(s_couplings); config.alpha = -1; }
                if (s_has_gamma) { config.gamma = s_gamma; config.spins_text.clear(); }
                if (!s_spins.empty()) { config.spins_text = read_file(s_spins); config.gamma = -1; }
                if (sim_cmd->count("--temp")) config.temp = scfg.temp;
                if (sim_cmd->count("--tmax")) config.tmax = scfg.tmax;
                if (sim_cmd->count("--seed")) config.seed = scfg.seed;
                if (sim_cmd->count("--replicas")) config.replicas = scfg.replicas;
                if (sim_cmd->count("--verbosity")) config.verbosity = scfg.verbosity;
                if (sim_cmd->count("--trace-stride")) config.trace_stride = scfg.trace_stride;
                if (sim_cmd->count("--cap")) config.cap = scfg.cap;
                if (config.alpha < 0 && config.couplings_text.empty()) config.alpha = 0.5;
                if (config.gamma < 0 && config.spins_text.empty()) config.gamma = 0.5;
                (void)def;
            }
            auto outcome = execute_run(config, threads, s_out);
            std::int64_t flips = 0;
            for (const auto& r : outcome.results) flips += r.total_flips();
            std::cout << "replicas: " << outcome.results.size()
                      << ", catalog: " << outcome.manifest.catalog_size
                      << ", accepted flips: " << flips << "\n";
            for (size_t i = 0; i < outcome.results.size(); ++i) {
                const auto& r = outcome.results[i];
                std::cout << "  replica " << i << ": events " << r.events << ", accepted "
                          << r.accepted << ", final H " << r.final_H << ", summary hash "
                          << std::hex
                          << fnv1a_64(summary_csv(*outcome.setup->window, r)) << std::dec
                          << "\n";
            }
            if (!s_out.empty()) std::cout << "wrote " << s_out << "/manifest.json\n";
            return 0;
        }

        // ---- classify ----------------------------------------------------
        if (cls_cmd->parsed()) {
            std::unique_ptr<RunSetup> setup;
            std::vector<SimResult> results;
            if (!c_config.empty()) {
                auto config = parse_config_text(read_file(c_config));
                auto outcome = execute_run(config, threads, c_out);
                setup = std::move(outcome.setup);
                results = std::move(outcome.results);
            } else if (!c_from.empty()) {
                for (const auto& dir : c_from) {
                    auto lr = load_run_dir(dir);
                    if (!setup) setup = std::move(lr.setup);
                    for (auto& r : lr.results) results.push_back(std::move(r));
                }
            } else {
                std::cerr << "classify needs --config or --from\n";
                return 2;
            }
            const auto& w = *setup->window;
            double t_max = results.front().t_end;
            double t_cut = c_tcut >= 0 ? c_tcut : t_max / 2.0;
            int shell = c_shell >= 0 ? c_shell : setup->config.k + 1;
            auto rep = estimate_rho(results, t_cut, default_ball(w, shell));
            if (c_tail) {
                for (const auto& r : results)
                    if (r.log_verbosity == LogVerbosity::None) {
                        std::cerr << "tail curve needs event logs (verbosity >= accepted)\n";
                        return 6;
                    }
                for (int i = 0; i <= 10; ++i) rep.tail_grid.push_back(t_max * i / 10.0);
                rep.tail_curve = opposition_tail(results, *setup->catalog, rep.ball, rep.tail_grid);
            }
            auto verdict = classify(rep);
            auto j = verdict_json(verdict, rep);
            std::cout << j.dump(2) << "\n";
            if (!c_out.empty()) {
                fs::create_directories(c_out);
                write_file(c_out + "/report.json", j.dump(2) + "\n");
            }
            return 0;
        }

        // ---- absence -----------------------------------------------------
        if (abs_cmd->parsed()) {
            PeriodicGraph g = a_spec.empty() ? resolve_preset(a_preset)
                                             : parse_cell_spec(read_file(a_spec));
            WindowGraph w(g, parse_extent(a_extent, g.dimension()),
                          a_boundary == "free" ? Boundary::Free : Boundary::Toroidal);
            auto J = load_coupling_assignment(w, read_file(a_couplings));
            auto rf = parse_region_file(w, read_file(a_region));

            if (!a_sigma.empty()) {
                auto spins = load_spin_assignment(w, read_file(a_sigma));
                std::map<std::int32_t, std::int8_t> sc;
                for (auto v : rf.region.vertices) sc[v] = spins[v];
                auto res = is_k_absent(w, J, rf.region, sc, a_k, a_cap);
                std::cout << (res.absent ? "absent" : "not absent") << " (k=" << a_k
                          << ", states explored " << res.states_explored << ")\n";
                if (res.absent && !a_witness_out.empty())
                    write_file(a_witness_out,
                               witness_to_json(w, *res.witness).dump(2) + "\n");
                if (a_k2 > a_k) {
                    bool ok = absence_monotone_check(w, J, rf.region, sc, a_k, a_k2, a_cap);
                    std::cout << "monotonicity k=" << a_k << " => k=" << a_k2 << ": "
                              << (ok ? "pass" : "VIOLATION") << "\n";
                    if (!ok) return 1;
                }
                return res.absent ? 0 : 1;
            }

            nlohmann::json witnesses = nlohmann::json::array();
            auto outcome = all_absent(
                w, J, rf.region, rf.constraints, a_k, a_cap,
                [&](const std::map<std::int32_t, std::int8_t>& sigma,
                    const AbsenceOutcome& r) {
                    if (r.absent && !a_witness_out.empty()) {
                        nlohmann::json item;
                        nlohmann::json cfg = nlohmann::json::object();
                        for (auto& [v, s] : sigma) cfg[w.vertex_name(v)] = static_cast<int>(s);
                        item["sigma"] = cfg;
                        item["witness"] = witness_to_json(w, *r.witness);
                        witnesses.push_back(item);
                    }
                });
            if (outcome.all && !outcome.vacuous)
                std::cout << "all " << a_k << "-absent (" << outcome.configurations_checked
                          << " configurations checked)\n";
            else if (outcome.vacuous)
                std::cout << "vacuous: no configuration satisfies the constraints\n";
            else {
                std::cout << "NOT all absent after " << outcome.configurations_checked
                          << " configurations; counterexample:\n";
                for (auto& [v, s] : *outcome.counterexample)
                    std::cout << "  " << w.vertex_name(v) << " = " << int(s) << "\n";
            }
            if (!a_witness_out.empty())
                write_file(a_witness_out, witnesses.dump(2) + "\n");
            return outcome.all ? 0 : 1;
        }

        // ---- sweep ---------------------------------------------------------
        if (sweep_cmd->parsed()) {
            auto text = read_file(w_grid);
            RunConfig base;
            std::vector<std::pair<std::string, std::vector<std::string>>> axes;
            std::istringstream in(text);
            std::string line;
            int lineno = 0;
            while (std::getline(in, line)) {
                ++lineno;
                auto hash = line.find('#');
                if (hash != std::string::npos) line.erase(hash);
                std::istringstream ls(line);
                std::string tok;
                if (!(ls >> tok)) continue;
                if (tok == "grid") {
                    std::string key;
                    if (!(ls >> key)) throw SpecError("grid line " + std::to_string(lineno) +
                                                      ": missing key");
                    std::vector<std::string> vals;
                    std::string v;
                    while (ls >> v) vals.push_back(v);
                    if (vals.empty()) throw SpecError("grid axis '" + key + "' has no values");
                    axes.emplace_back(key, vals);
                } else {
                    auto eq = line.find('=');
                    if (eq == std::string::npos)
                        throw SpecError("grid line " + std::to_string(lineno) +
                                        ": expected key=value or grid directive");
                    std::istringstream one(line);
                    base = parse_config_text(line + "\n", base);
                }
            }
            std::int64_t cells = 1;
            for (auto& [k, vs] : axes) cells *= static_cast<std::int64_t>(vs.size());
            if (axes.empty() || cells == 0) {
                std::cerr << "empty grid\n";
                return 2;
            }
            fs::create_directories(w_out);
            std::ostringstream agg;
            agg << "cell";
            for (auto& [k, vs] : axes) agg << "," << k;
            agg << ",exit,catalog,accepted_flips,flips_per_site,rho_I_hat,max_last_flip\n";
            int failures = 0;
            for (std::int64_t ci = 0; ci < cells; ++ci) {
                RunConfig cfg = base;
                std::int64_t rest = ci;
                std::vector<std::string> labels;
                for (auto& [key, vals] : axes) {
                    const auto& val = vals[rest % vals.size()];
                    rest /= vals.size();
                    labels.push_back(val);
                    if (key == "L") cfg.extent = val;
                    else apply_config_line(cfg, key, val);
                }
                std::string cell_dir = w_out + "/cell_" + std::to_string(ci);
                int exit_code = 0;
                std::int64_t catalog = 0, accepted = 0;
                double fps = 0, rho = 0, last = 0;
                try {
                    auto outcome = execute_run(cfg, threads, cell_dir);
                    catalog = outcome.manifest.catalog_size;
                    for (auto& r : outcome.results) accepted += r.total_flips();
                    fps = static_cast<double>(accepted) /
                          (static_cast<double>(outcome.setup->window->vertex_count()) *
                           outcome.results.size());
                    auto rep = estimate_rho(outcome.results, cfg.tmax / 2.0,
                                            default_ball(*outcome.setup->window, cfg.k + 1));
                    rho = rep.rho_I_hat;
                    for (auto& r : outcome.results)
                        last = std::max(last, std::isfinite(r.max_last_flip())
                                                   ? r.max_last_flip()
                                                   : 0.0);
                } catch (const std::exception& e) {
                    std::cerr << "cell " << ci << " failed: " << e.what() << "\n";
                    exit_code = 3;
                    ++failures;
                }
                agg << ci;
                for (auto& l : labels) agg << "," << l;
                agg << "," << exit_code << "," << catalog << "," << accepted << "," << fps
                    << "," << rho << "," << last << "\n";
            }
            write_file(w_out + "/sweep.csv", agg.str());
            std::cout << "sweep: " << cells << " cells, " << failures << " failures; wrote "
                      << w_out << "/sweep.csv\n";
            return failures == 0 ? 0 : 1;
        }
    } catch (const CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return abs_cmd->parsed() ? 7 : 4;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
