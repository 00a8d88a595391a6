#include "droplet/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "droplet/grid.hpp"

namespace droplet {

namespace {

using nlohmann::json;

// nlohmann keeps the last of duplicate keys silently; catch them with a
// SAX-level callback tracking keys per object depth.
json parse_strict_json(const std::string& text) {
    std::vector<std::set<std::string>> seen;
    auto cb = [&](int depth, json::parse_event_t ev, json& parsed) {
        if (ev == json::parse_event_t::object_start) {
            seen.resize(std::size_t(depth) + 1);
            seen[std::size_t(depth)].clear();
        } else if (ev == json::parse_event_t::key) {
            std::string key = parsed.get<std::string>();
            if (!seen[std::size_t(depth) - 1].insert(key).second)
                throw ConfigError("duplicate key \"" + key + "\" in config");
        }
        return true;
    };
    try {
        return json::parse(text, cb);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key at " + path + "/" + it.key());
}

template <class T>
T get_as(const json& obj, const std::string& path, const std::string& key,
         T fallback) {
    if (!obj.contains(key))
        return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("type mismatch at " + path + "/" + key);
    }
}

// Tabulated potentials ship only the sampled values; the Laplacian comes
// from the 5-point stencil (one-sided copy at the edges).
Potential load_tabulated(const std::string& file) {
    ScalarField phi = read_field(file);
    const BoxGrid& g = phi.grid;
    const int M = g.nodes_per_side();
    const double h2 = g.spacing() * g.spacing();
    ScalarField lap(g);
    for (int iy = 1; iy + 1 < M; ++iy)
        for (int ix = 1; ix + 1 < M; ++ix)
            lap.at(ix, iy) = (phi.at(ix + 1, iy) + phi.at(ix - 1, iy) +
                              phi.at(ix, iy + 1) + phi.at(ix, iy - 1) -
                              4.0 * phi.at(ix, iy)) /
                             h2;
    for (int i = 0; i < M; ++i) {
        lap.at(i, 0) = lap.at(std::min(std::max(i, 1), M - 2), 1);
        lap.at(i, M - 1) = lap.at(std::min(std::max(i, 1), M - 2), M - 2);
        lap.at(0, i) = lap.at(1, std::min(std::max(i, 1), M - 2));
        lap.at(M - 1, i) = lap.at(M - 2, std::min(std::max(i, 1), M - 2));
    }
    return Potential::tabulated(phi, lap);
}

Potential parse_potential(const json& p) {
    if (!p.is_object())
        throw ConfigError("type mismatch at /potential: expected object");
    std::string family = get_as<std::string>(p, "/potential", "family", "");
    if (family.empty())
        throw ConfigError("missing key /potential/family");
    try {
        if (family == "gaussian") {
            reject_unknown(p, "/potential", {"family"});
            return Potential::gaussian();
        }
        if (family == "elbau_felder") {
            reject_unknown(p, "/potential", {"family", "a"});
            if (!p.contains("a"))
                throw ConfigError("missing key /potential/a");
            return Potential::elbau_felder(
                get_as<double>(p, "/potential", "a", 0.0));
        }
        if (family == "radial_monomial") {
            reject_unknown(p, "/potential", {"family", "p"});
            if (!p.contains("p"))
                throw ConfigError("missing key /potential/p");
            return Potential::radial_monomial(
                get_as<int>(p, "/potential", "p", 0));
        }
        if (family == "tabulated") {
            reject_unknown(p, "/potential", {"family", "path"});
            if (!p.contains("path"))
                throw ConfigError("missing key /potential/path");
            return load_tabulated(
                get_as<std::string>(p, "/potential", "path", ""));
        }
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("bound violated at /potential: ") +
                          e.what());
    }
    throw ConfigError("unknown potential family \"" + family +
                      "\" at /potential/family");
}

void check_bounds(const RunConfig& c) {
    if (!(c.box > 0))
        throw ConfigError("bound violated at /grid/box: must be positive");
    if (c.nodes < 16 || c.nodes % 2 != 0)
        throw ConfigError("bound violated at /grid/nodes: even and >= 16");
    if (!(c.tau > 0))
        throw ConfigError("bound violated at /tau: must be positive");
    if (c.N < 1)
        throw ConfigError("bound violated at /N: must be >= 1");
    if (c.steps < 1)
        throw ConfigError("bound violated at /steps: must be >= 1");
    if (c.chains < 1)
        throw ConfigError("bound violated at /chains: must be >= 1");
    if (c.restarts < 1)
        throw ConfigError("bound violated at /restarts: must be >= 1");
    if (!(c.mass_rel_tol > 0))
        throw ConfigError(
            "bound violated at /tolerances/mass_rel_tol: must be positive");
    if (!(c.psor_tol > 0))
        throw ConfigError(
            "bound violated at /tolerances/psor_tol: must be positive");
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    json j = parse_strict_json(text);
    if (!j.is_object())
        throw ConfigError("type mismatch at /: expected object");
    reject_unknown(j, "", {"potential", "grid", "tau", "N", "steps", "burn_in",
                           "seed", "chains", "restarts", "tolerances",
                           "output_dir"});

    RunConfig c;
    if (j.contains("potential"))
        c.potential = parse_potential(j.at("potential"));
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (!g.is_object())
            throw ConfigError("type mismatch at /grid: expected object");
        reject_unknown(g, "/grid", {"box", "nodes"});
        c.box = get_as<double>(g, "/grid", "box", c.box);
        c.nodes = get_as<int>(g, "/grid", "nodes", c.nodes);
    }
    c.tau = get_as<double>(j, "", "tau", c.tau);
    c.N = get_as<int>(j, "", "N", c.N);
    c.steps = get_as<long>(j, "", "steps", c.steps);
    c.burn_in = get_as<long>(j, "", "burn_in", c.burn_in);
    c.seed = get_as<std::uint64_t>(j, "", "seed", c.seed);
    c.chains = get_as<int>(j, "", "chains", c.chains);
    c.restarts = get_as<int>(j, "", "restarts", c.restarts);
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object())
            throw ConfigError("type mismatch at /tolerances: expected object");
        reject_unknown(t, "/tolerances", {"mass_rel_tol", "psor_tol"});
        c.mass_rel_tol =
            get_as<double>(t, "/tolerances", "mass_rel_tol", c.mass_rel_tol);
        c.psor_tol = get_as<double>(t, "/tolerances", "psor_tol", c.psor_tol);
    }
    c.output_dir = get_as<std::string>(j, "", "output_dir", c.output_dir);
    check_bounds(c);
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string RunConfig::effective_json() const {
    json j;
    j["potential"] = json::parse(potential.descriptor());
    j["grid"] = {{"box", box}, {"nodes", nodes}};
    j["tau"] = tau;
    j["N"] = N;
    j["steps"] = steps;
    j["burn_in"] = burn_in;
    j["seed"] = seed;
    j["chains"] = chains;
    j["restarts"] = restarts;
    j["tolerances"] = {{"mass_rel_tol", mass_rel_tol},
                       {"psor_tol", psor_tol}};
    j["output_dir"] = output_dir;
    return j.dump(2) + "\n";
}

void echo_effective_config(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream out(std::filesystem::path(cfg.output_dir) /
                      "effective_config.json");
    if (!out)
        throw ConfigError("cannot write effective config to " + cfg.output_dir);
    out << cfg.effective_json();
}

} // namespace droplet
