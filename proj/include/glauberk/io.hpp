#pragma once

// Run configuration, file formats and the manifest. A manifest embeds the
// fully resolved configuration (including any file contents it depended on),
// so re-running it reproduces the same logs byte for byte.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "glauberk/absence.hpp"
#include "glauberk/analysis.hpp"
#include "glauberk/cellspec.hpp"
#include "glauberk/dynamics.hpp"
#include "glauberk/errors.hpp"
#include "glauberk/model.hpp"
#include "glauberk/presets.hpp"

namespace glauberk {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::uint64_t fnv1a_64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
}

// ---- tokens -----------------------------------------------------------------

inline TemperatureProfile parse_temperature(const std::string& token) {
    if (token == "zero") return TemperatureProfile::zero();
    auto colon = token.find(':');
    const std::string kind = token.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : token.substr(colon + 1);
    if (kind == "const") {
        return TemperatureProfile::constant(std::stod(rest));
    }
    if (kind == "logdecay") {
        auto comma = rest.find(',');
        if (comma == std::string::npos) return TemperatureProfile::log_decay(std::stod(rest));
        return TemperatureProfile::log_decay(std::stod(rest.substr(0, comma)),
                                             std::stod(rest.substr(comma + 1)));
    }
    if (kind == "table") {
        std::vector<std::pair<double, double>> pts;
        std::istringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ';')) {
            auto comma = item.find(',');
            if (comma == std::string::npos) throw SpecError("bad table point '" + item + "'");
            pts.emplace_back(std::stod(item.substr(0, comma)),
                             std::stod(item.substr(comma + 1)));
        }
        return TemperatureProfile::table(std::move(pts));
    }
    throw SpecError("unknown temperature token '" + token + "'");
}

// extent token: either a single cell count n meaning [0,n) on every axis, or
// per-axis ranges "lo:hi" joined by 'x', e.g. "-4:4x-4:4"
inline Extent parse_extent(const std::string& token, int dimension) {
    Extent ext;
    if (token.find(':') == std::string::npos) {
        int n = std::stoi(token);
        return block_extent(dimension, n);
    }
    std::istringstream ss(token);
    std::string axis;
    while (std::getline(ss, axis, 'x')) {
        auto colon = axis.find(':');
        if (colon == std::string::npos) throw SpecError("bad extent axis '" + axis + "'");
        ext.push_back({std::stoi(axis.substr(0, colon)), std::stoi(axis.substr(colon + 1))});
    }
    if (static_cast<int>(ext.size()) != dimension)
        throw SpecError("extent has " + std::to_string(ext.size()) + " axes, graph has " +
                        std::to_string(dimension));
    return ext;
}

// vertex token: "c1,...,cd:local"
inline VertexId parse_vertex(const std::string& token, int dimension) {
    auto colon = token.rfind(':');
    if (colon == std::string::npos) throw SpecError("bad vertex token '" + token + "'");
    VertexId vid;
    vid.local = std::stoi(token.substr(colon + 1));
    std::istringstream ss(token.substr(0, colon));
    std::string c;
    while (std::getline(ss, c, ',')) vid.cell.push_back(std::stoi(c));
    if (static_cast<int>(vid.cell.size()) != dimension)
        throw SpecError("vertex token '" + token + "' has wrong cell dimension");
    return vid;
}

// ---- run configuration -------------------------------------------------------

struct RunConfig {
    std::string graph = "cubic2";   // preset | gamma:base,ell,m | file:PATH
    std::string graph_text;         // cell-spec text when graph came from a file
    std::string extent = "8";
    std::string boundary = "toroidal";
    int k = 1;
    double alpha = -1.0;            // in [0,1] when couplings are sampled
    std::string couplings_text;     // coupling assignment when alpha < 0
    double gamma = -1.0;            // in [0,1] when initial spins are sampled
    std::string spins_text;         // spin assignment when gamma < 0
    std::string temp = "zero";
    double tmax = 100.0;
    std::uint64_t seed = 1;
    int replicas = 1;
    std::string verbosity = "none";
    std::int64_t trace_stride = 0;
    std::int64_t cap = FlipSetCatalog::kDefaultCap;
};

inline void apply_config_line(RunConfig& c, const std::string& key, const std::string& val) {
    if (key == "graph") c.graph = val;
    else if (key == "extent") c.extent = val;
    else if (key == "boundary") c.boundary = val;
    else if (key == "k") c.k = std::stoi(val);
    else if (key == "alpha") { c.alpha = std::stod(val); c.couplings_text.clear(); }
    else if (key == "couplings") { c.couplings_text = read_file(val); c.alpha = -1.0; }
    else if (key == "gamma") { c.gamma = std::stod(val); c.spins_text.clear(); }
    else if (key == "spins") { c.spins_text = read_file(val); c.gamma = -1.0; }
    else if (key == "temp") c.temp = val;
    else if (key == "tmax") c.tmax = std::stod(val);
    else if (key == "seed") c.seed = std::stoull(val);
    else if (key == "replicas") c.replicas = std::stoi(val);
    else if (key == "verbosity") c.verbosity = val;
    else if (key == "trace_stride") c.trace_stride = std::stoll(val);
    else if (key == "cap") c.cap = std::stoll(val);
    else throw SpecError("unknown config key '" + key + "'");
}

inline RunConfig parse_config_text(const std::string& text, RunConfig base = {}) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SpecError("config line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        apply_config_line(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["graph"] = c.graph;
    if (!c.graph_text.empty()) j["graph_text"] = c.graph_text;
    j["extent"] = c.extent;
    j["boundary"] = c.boundary;
    j["k"] = c.k;
    if (c.alpha >= 0) j["alpha"] = c.alpha;
    if (!c.couplings_text.empty()) j["couplings_text"] = c.couplings_text;
    if (c.gamma >= 0) j["gamma"] = c.gamma;
    if (!c.spins_text.empty()) j["spins_text"] = c.spins_text;
    j["temp"] = c.temp;
    j["tmax"] = c.tmax;
    j["seed"] = c.seed;
    j["replicas"] = c.replicas;
    j["verbosity"] = c.verbosity;
    j["trace_stride"] = c.trace_stride;
    j["cap"] = c.cap;
    return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.graph = j.at("graph").get<std::string>();
    if (j.contains("graph_text")) c.graph_text = j["graph_text"].get<std::string>();
    c.extent = j.at("extent").get<std::string>();
    c.boundary = j.at("boundary").get<std::string>();
    c.k = j.at("k").get<int>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("couplings_text")) c.couplings_text = j["couplings_text"].get<std::string>();
    if (j.contains("gamma")) c.gamma = j["gamma"].get<double>();
    if (j.contains("spins_text")) c.spins_text = j["spins_text"].get<std::string>();
    c.temp = j.at("temp").get<std::string>();
    c.tmax = j.at("tmax").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.replicas = j.at("replicas").get<int>();
    c.verbosity = j.at("verbosity").get<std::string>();
    c.trace_stride = j.at("trace_stride").get<std::int64_t>();
    c.cap = j.at("cap").get<std::int64_t>();
    return c;
}

inline std::uint64_t config_hash(const RunConfig& c) {
    return fnv1a_64(config_to_json(c).dump());
}

// ---- resolved run setup -------------------------------------------------------

struct RunSetup {
    PeriodicGraph graph;
    std::unique_ptr<WindowGraph> window;
    std::unique_ptr<FlipSetCatalog> catalog;
    Interactions couplings;
    TemperatureProfile profile;
    std::optional<SpinState> fixed_initial;
    RunConfig config;  // with graph_text resolved

    DynamicsOptions dynamics_options() const {
        DynamicsOptions o;
        if (config.verbosity == "accepted") o.verbosity = LogVerbosity::Accepted;
        else if (config.verbosity == "all") o.verbosity = LogVerbosity::All;
        else if (config.verbosity == "none") o.verbosity = LogVerbosity::None;
        else throw SpecError("unknown verbosity '" + config.verbosity + "'");
        o.energy_stride = config.trace_stride;
        return o;
    }

    SimContext context() const { return {window.get(), catalog.get(), &couplings, &profile}; }

    SpinState make_initial(int replica, std::uint64_t replica_seed) const {
        (void)replica;
        if (fixed_initial) return *fixed_initial;
        Rng r(replica_seed ^ 0x5eed5eedULL);
        return sample_initial(*window, config.gamma, r);
    }

    std::vector<SimResult> run_all(int threads = 1) const {
        return run_replicas(
            context(), [this](int i, std::uint64_t s) { return make_initial(i, s); },
            config.seed, config.replicas, config.tmax, dynamics_options(), threads);
    }
};

inline PeriodicGraph resolve_graph(RunConfig& c) {
    if (c.graph.rfind("file:", 0) == 0) {
        if (c.graph_text.empty()) c.graph_text = read_file(c.graph.substr(5));
        return parse_cell_spec(c.graph_text);
    }
    if (!c.graph_text.empty()) return parse_cell_spec(c.graph_text);
    return resolve_preset(c.graph);
}

inline RunSetup resolve_run(RunConfig config) {
    RunSetup s;
    s.graph = resolve_graph(config);
    Boundary b;
    if (config.boundary == "toroidal") b = Boundary::Toroidal;
    else if (config.boundary == "free") b = Boundary::Free;
    else throw SpecError("unknown boundary '" + config.boundary + "'");
    s.window = std::make_unique<WindowGraph>(
        s.graph, parse_extent(config.extent, s.graph.dimension()), b);
    s.catalog = std::make_unique<FlipSetCatalog>(*s.window, config.k, config.cap);
    if (config.alpha >= 0) {
        Rng env(config.seed ^ 0xC0FFEE0000000001ULL);
        s.couplings = sample_interactions(*s.window, config.alpha, env);
    } else if (!config.couplings_text.empty()) {
        s.couplings = load_coupling_assignment(*s.window, config.couplings_text);
    } else {
        throw SpecError("config needs either alpha or a couplings file");
    }
    if (config.gamma < 0) {
        if (config.spins_text.empty())
            throw SpecError("config needs either gamma or a spins file");
        s.fixed_initial = load_spin_assignment(*s.window, config.spins_text);
    }
    s.profile = parse_temperature(config.temp);
    s.config = std::move(config);
    return s;
}

// ---- result serialization ------------------------------------------------------

inline std::string summary_csv(const WindowGraph& w, const SimResult& r) {
    std::ostringstream os;
    os.precision(17);
    os << "cell,local,n_minus,n_zero,n_plus,arrivals,last_flip_t,final_spin\n";
    for (int v = 0; v < w.vertex_count(); ++v) {
        VertexId vid = w.vertex_of(v);
        os << vid.cell[0];
        for (size_t a = 1; a < vid.cell.size(); ++a) os << ";" << vid.cell[a];
        const auto& led = r.per_vertex[v];
        os << "," << vid.local << "," << led.n_minus << "," << led.n_zero << ","
           << led.n_plus << "," << led.arrivals << ",";
        if (std::isfinite(led.last_flip_t)) os << led.last_flip_t;
        else os << "never";
        os << "," << static_cast<int>(r.final_spins[v]) << "\n";
    }
    return os.str();
}

inline std::string events_jsonl(const WindowGraph& w, const FlipSetCatalog& catalog,
                                const SimResult& r) {
    std::ostringstream os;
    for (const auto& ev : r.event_log) {
        nlohmann::json j;
        j["seq"] = ev.seq;
        j["t"] = ev.t;
        j["set_id"] = ev.set_id;
        auto members = catalog.set(ev.set_id);
        std::vector<std::string> names;
        for (auto v : members) names.push_back(w.vertex_name(v));
        j["set"] = names;
        j["delta"] = ev.delta;
        j["u"] = ev.u;
        j["accepted"] = ev.accepted;
        os << j.dump() << "\n";
    }
    return os.str();
}

inline std::string energy_csv(const WindowGraph& w, const SimResult& r) {
    std::ostringstream os;
    os.precision(17);
    os << "t,H,D\n";
    for (const auto& s : r.energy_trace)
        os << s.t << "," << s.H << ","
           << static_cast<double>(s.H) / static_cast<double>(w.vertex_count()) << "\n";
    return os.str();
}

// ---- manifest -------------------------------------------------------------------

struct Manifest {
    RunConfig config;
    std::vector<std::uint64_t> replica_seeds;
    std::int64_t catalog_size = 0;
    std::map<std::string, std::string> artifacts;  // kind -> filename
    double wall_clock_s = 0.0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool"] = "glauberk";
        j["version"] = kToolVersion;
        j["rng"] = kRngAlgorithm;
        j["config"] = config_to_json(config);
        j["config_hash"] = config_hash(config);
        j["replica_seeds"] = replica_seeds;
        j["catalog_size"] = catalog_size;
        j["artifacts"] = artifacts;
        j["wall_clock_s"] = wall_clock_s;
        return j;
    }

    static Manifest from_json(const nlohmann::json& j) {
        Manifest m;
        m.config = config_from_json(j.at("config"));
        m.replica_seeds = j.at("replica_seeds").get<std::vector<std::uint64_t>>();
        m.catalog_size = j.at("catalog_size").get<std::int64_t>();
        if (j.contains("artifacts"))
            m.artifacts = j["artifacts"].get<std::map<std::string, std::string>>();
        if (j.contains("wall_clock_s")) m.wall_clock_s = j["wall_clock_s"].get<double>();
        return m;
    }
};

inline std::uint64_t replica_seed_of(std::uint64_t seed, int replica) {
    std::uint64_t s = static_cast<std::uint64_t>(replica) + 1;
    return seed ^ splitmix64(s);
}

// ---- region files ----------------------------------------------------------------

struct RegionFile {
    Region region;
    SpinConstraints constraints;
};

inline RegionFile parse_region_file(const WindowGraph& w, const std::string& text) {
    RegionFile rf;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    const int d = w.dimension();
    auto fail = [&](const std::string& msg) {
        throw SpecError("region line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "region") {
            std::string v;
            while (ls >> v) rf.region.vertices.push_back(w.index_of(parse_vertex(v, d)));
        } else if (tok == "mode") {
            std::string m;
            if (!(ls >> m)) fail("missing mode");
            if (m == "interior-only") rf.region.mode = ExteriorMode::InteriorOnly;
            else if (m == "given-exterior") rf.region.mode = ExteriorMode::GivenExterior;
            else fail("unknown mode '" + m + "'");
        } else if (tok == "fix") {
            std::string v, s;
            if (!(ls >> v >> s)) fail("fix needs vertex and value");
            rf.constraints.fixed[w.index_of(parse_vertex(v, d))] = detail::parse_pm1(s, lineno);
        } else if (tok == "require-equal" || tok == "require-opposite") {
            std::string a, b;
            if (!(ls >> a >> b)) fail("constraint needs two vertices");
            auto ia = w.index_of(parse_vertex(a, d));
            auto ib = w.index_of(parse_vertex(b, d));
            if (tok == "require-equal") rf.constraints.equal.emplace_back(ia, ib);
            else rf.constraints.opposite.emplace_back(ia, ib);
        } else if (tok == "exterior") {
            std::string v, s;
            if (!(ls >> v >> s)) fail("exterior needs vertex and value");
            rf.region.exterior[w.index_of(parse_vertex(v, d))] = detail::parse_pm1(s, lineno);
        } else {
            fail("unknown directive '" + tok + "'");
        }
    }
    if (rf.region.vertices.empty()) throw SpecError("region file defines no region");
    return rf;
}

inline nlohmann::json witness_to_json(const WindowGraph& w, const AbsenceWitness& wit) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& st : wit.steps) {
        nlohmann::json s;
        std::vector<std::string> names;
        for (auto v : st.set) names.push_back(w.vertex_name(v));
        s["set"] = names;
        s["delta"] = st.delta;
        steps.push_back(s);
    }
    return nlohmann::json{{"steps", steps}};
}

// ---- window export ----------------------------------------------------------------

inline std::string window_edge_list(const WindowGraph& w) {
    std::ostringstream os;
    for (const auto& e : w.edges()) {
        VertexId u = w.vertex_of(e.u), v = w.vertex_of(e.v);
        for (int c : u.cell) os << c << " ";
        os << u.local;
        for (int c : v.cell) os << " " << c;
        os << " " << v.local << "\n";
    }
    return os.str();
}

}  // namespace glauberk
