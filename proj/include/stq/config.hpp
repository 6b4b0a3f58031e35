#ifndef STQ_CONFIG_HPP
#define STQ_CONFIG_HPP

#include <array>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stq/dynamics.hpp"
#include "stq/hubbard.hpp"

namespace stq {

/// Raised for any malformed run configuration (strict schema: unknown keys,
/// wrong types, out-of-range values). Maps to exit code 1 in the CLI.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Microscopic Fermi-Hubbard section; rotations and Zeeman fields are shared
/// with the spin section (the same device, two levels of description).
struct HubbardSection {
    std::array<double, 4> eps{-20.0, -20.0, -20.0, -20.0};
    double u = 2000.0;
    bool u_infinite = false;
    double t1 = 0.0;
    double t2 = 0.0;
    double gamma_ca = 0.0;
    double phi_u = 0.0;
    double phi_l = 0.0;
    bool single_sc = true;
};

struct OutputSection {
    std::string path;          // empty: stdout
    std::string format = "csv"; // csv | json
};

/// Full run configuration. Units are fixed: energies in ueV, times in ns,
/// angles in radians.
struct RunConfig {
    UniformModel spin;
    std::optional<HubbardSection> hubbard;
    std::vector<GridAxis> sweep;
    OutputSection output;
    int workers = 1;

    /// Hubbard parameters of the configured device: dot section plus the
    /// spin section's Zeeman magnitudes and uniform spin-orbit rotations.
    HubbardParams hubbard_params() const {
        if (!hubbard) throw ConfigError("config: this command requires a 'hubbard' section");
        HubbardParams p;
        p.eps = hubbard->eps;
        p.u = hubbard->u;
        p.u_infinite = hubbard->u_infinite;
        p.t1 = hubbard->t1;
        p.t2 = hubbard->t2;
        p.gamma_ca = hubbard->gamma_ca;
        p.phi_u = hubbard->phi_u;
        p.phi_l = hubbard->phi_l;
        p.single_sc = hubbard->single_sc;
        const SpinParams sp = spin.spin_params();
        p.h = sp.h;
        p.rot1 = sp.rot1;
        p.rot2 = sp.rot2;
        p.rot_ca = sp.rotsc;
        return p;
    }
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (key == k) ok = true;
        if (!ok) throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
}

inline double get_number(const json& obj, const char* key, double fallback,
                         const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw ConfigError("config: '" + std::string(key) + "' in " + where + " must be a number");
    return obj[key].get<double>();
}

inline bool get_bool(const json& obj, const char* key, bool fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean())
        throw ConfigError("config: '" + std::string(key) + "' in " + where + " must be a boolean");
    return obj[key].get<bool>();
}

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    detail::json root;
    try {
        root = detail::json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    detail::reject_unknown(root, {"spin", "hubbard", "sweep", "output", "workers"}, "top level");

    RunConfig cfg;
    if (root.contains("spin")) {
        const auto& s = root["spin"];
        if (!s.is_object()) throw ConfigError("config: 'spin' must be an object");
        detail::reject_unknown(
            s, {"hbar", "dh", "dh1", "dh2", "j1", "j2", "jsc", "phi_so", "theta", "junction", "phi"},
            "'spin'");
        cfg.spin.hbar = detail::get_number(s, "hbar", cfg.spin.hbar, "'spin'");
        cfg.spin.dh = detail::get_number(s, "dh", cfg.spin.dh, "'spin'");
        cfg.spin.dh1 = detail::get_number(s, "dh1", cfg.spin.dh1, "'spin'");
        cfg.spin.dh2 = detail::get_number(s, "dh2", cfg.spin.dh2, "'spin'");
        cfg.spin.j1 = detail::get_number(s, "j1", cfg.spin.j1, "'spin'");
        cfg.spin.j2 = detail::get_number(s, "j2", cfg.spin.j2, "'spin'");
        cfg.spin.jsc = detail::get_number(s, "jsc", cfg.spin.jsc, "'spin'");
        cfg.spin.phi_so = detail::get_number(s, "phi_so", cfg.spin.phi_so, "'spin'");
        cfg.spin.theta = detail::get_number(s, "theta", cfg.spin.theta, "'spin'");
        cfg.spin.junction = detail::get_bool(s, "junction", cfg.spin.junction, "'spin'");
        cfg.spin.phi = detail::get_number(s, "phi", cfg.spin.phi, "'spin'");
    }
    if (root.contains("hubbard")) {
        const auto& h = root["hubbard"];
        if (!h.is_object()) throw ConfigError("config: 'hubbard' must be an object");
        detail::reject_unknown(h,
                               {"eps", "u", "u_infinite", "t1", "t2", "gamma_ca", "phi_u", "phi_l",
                                "single_sc"},
                               "'hubbard'");
        HubbardSection hs;
        if (h.contains("eps")) {
            if (!h["eps"].is_array() || h["eps"].size() != 4)
                throw ConfigError("config: 'eps' must be an array of 4 numbers");
            for (int i = 0; i < 4; ++i) {
                if (!h["eps"][static_cast<size_t>(i)].is_number())
                    throw ConfigError("config: 'eps' entries must be numbers");
                hs.eps[static_cast<size_t>(i)] = h["eps"][static_cast<size_t>(i)].get<double>();
            }
        }
        hs.u = detail::get_number(h, "u", hs.u, "'hubbard'");
        hs.u_infinite = detail::get_bool(h, "u_infinite", hs.u_infinite, "'hubbard'");
        hs.t1 = detail::get_number(h, "t1", hs.t1, "'hubbard'");
        hs.t2 = detail::get_number(h, "t2", hs.t2, "'hubbard'");
        hs.gamma_ca = detail::get_number(h, "gamma_ca", hs.gamma_ca, "'hubbard'");
        hs.phi_u = detail::get_number(h, "phi_u", hs.phi_u, "'hubbard'");
        hs.phi_l = detail::get_number(h, "phi_l", hs.phi_l, "'hubbard'");
        hs.single_sc = detail::get_bool(h, "single_sc", hs.single_sc, "'hubbard'");
        cfg.hubbard = hs;
    }
    if (root.contains("sweep")) {
        const auto& sw = root["sweep"];
        if (!sw.is_array()) throw ConfigError("config: 'sweep' must be an array of axes");
        if (sw.size() > 3) throw ConfigError("config: at most 3 sweep axes supported");
        for (const auto& axj : sw) {
            if (!axj.is_object()) throw ConfigError("config: each sweep axis must be an object");
            detail::reject_unknown(axj, {"name", "start", "stop", "count"}, "'sweep' axis");
            GridAxis ax;
            if (!axj.contains("name") || !axj["name"].is_string())
                throw ConfigError("config: sweep axis needs a string 'name'");
            ax.name = axj["name"].get<std::string>();
            ax.start = detail::get_number(axj, "start", 0.0, "'sweep' axis");
            ax.stop = detail::get_number(axj, "stop", ax.start, "'sweep' axis");
            if (axj.contains("count")) {
                if (!axj["count"].is_number_integer())
                    throw ConfigError("config: sweep axis 'count' must be an integer");
                ax.count = axj["count"].get<int>();
            }
            if (ax.count < 1) throw ConfigError("config: sweep axis 'count' must be >= 1");
            cfg.sweep.push_back(ax);
        }
    }
    if (root.contains("output")) {
        const auto& o = root["output"];
        if (!o.is_object()) throw ConfigError("config: 'output' must be an object");
        detail::reject_unknown(o, {"path", "format"}, "'output'");
        if (o.contains("path")) {
            if (!o["path"].is_string()) throw ConfigError("config: 'output.path' must be a string");
            cfg.output.path = o["path"].get<std::string>();
        }
        if (o.contains("format")) {
            if (!o["format"].is_string())
                throw ConfigError("config: 'output.format' must be a string");
            cfg.output.format = o["format"].get<std::string>();
        }
        if (cfg.output.format != "csv" && cfg.output.format != "json")
            throw ConfigError("config: 'output.format' must be 'csv' or 'json'");
    }
    if (root.contains("workers")) {
        if (!root["workers"].is_number_integer() || root["workers"].get<int>() < 1)
            throw ConfigError("config: 'workers' must be a positive integer");
        cfg.workers = root["workers"].get<int>();
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

} // namespace stq

#endif
