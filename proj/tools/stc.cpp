// stc: command-line front end for the singlet-triplet coupler library.
// Subcommands cover coupling tables, anisotropy surfaces, spectra, leakage
// traces, phase-tunable exchange, fidelity maps, and the perturbative
// cross-check of the spin model against the microscopic Hubbard model.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stq/config.hpp"
#include "stq/constants.hpp"
#include "stq/dynamics.hpp"
#include "stq/eig.hpp"
#include "stq/hubbard.hpp"
#include "stq/st_effective.hpp"

namespace {

using namespace stq;

// 17 significant digits: round-trip exact for IEEE doubles.
std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct Cell {
    std::string text;
    bool numeric = true;

    Cell(double x) : text(fmt17(x)) {}
    Cell(const std::string& s) : text(s), numeric(false) {}
    Cell(const char* s) : text(s), numeric(false) {}
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const Table& t) {
    std::string out;
    for (size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ',';
        out += t.header[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i].text;
        }
        out += '\n';
    }
    return out;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out += c;
        }
    }
    return out;
}

std::string render_json(const Table& t) {
    std::string out = "[\n";
    for (size_t r = 0; r < t.rows.size(); ++r) {
        out += "  {";
        for (size_t i = 0; i < t.rows[r].size(); ++i) {
            if (i) out += ", ";
            out += '"' + t.header[i] + "\": ";
            const Cell& c = t.rows[r][i];
            if (c.numeric)
                out += c.text;
            else
                out += '"' + json_escape(c.text) + '"';
        }
        out += (r + 1 < t.rows.size()) ? "},\n" : "}\n";
    }
    out += "]\n";
    return out;
}

void emit(const Table& t, const OutputSection& out) {
    const std::string text = (out.format == "json") ? render_json(t) : render_csv(t);
    if (out.path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out.path, std::ios::binary);
        if (!f) throw ConfigError("output: cannot open '" + out.path + "' for writing");
        f << text;
    }
}

const GridAxis& require_axis(const RunConfig& cfg, const std::string& name) {
    for (const auto& ax : cfg.sweep)
        if (ax.name == name) return ax;
    throw ConfigError("config: this command requires a sweep axis named '" + name + "'");
}

// ---------------------------------------------------------------------------

void cmd_couplings(const RunConfig& cfg) {
    const HubbardParams p = cfg.hubbard_params();
    Table t;
    t.header = {"variant", "j1", "j2", "jsc"};
    for (const CouplingVariant v :
         {CouplingVariant::MAIN, CouplingVariant::SM, CouplingVariant::INFINITE_U}) {
        const ExchangeCouplings c = exchange_couplings(p, v);
        t.rows.push_back({std::string(to_string(v)), Cell(c.j1), Cell(c.j2), Cell(c.jsc)});
    }
    emit(t, cfg.output);
}

void cmd_gammas(const RunConfig& cfg) {
    const GridAxis& phi_ax = require_axis(cfg, "phi");
    const GridAxis& th_ax = require_axis(cfg, "theta");
    Table t;
    t.header = {"phi", "theta", "gamma_par", "gamma_perp_re", "gamma_perp_im"};
    for (int i = 0; i < phi_ax.count; ++i)
        for (int j = 0; j < th_ax.count; ++j) {
            const double phi = phi_ax.value(i);
            const double th = th_ax.value(j);
            const cplx gp = gamma_perp(phi, th);
            t.rows.push_back({Cell(phi), Cell(th), Cell(gamma_parallel(phi, th)), Cell(gp.real()),
                              Cell(gp.imag())});
        }
    emit(t, cfg.output);
}

void cmd_spectrum(const RunConfig& cfg) {
    const GridAxis& ax = require_axis(cfg, "hbar");
    Table t;
    t.header = {"hbar"};
    for (int k = 0; k < 16; ++k) t.header.push_back("e" + std::to_string(k));
    for (int i = 0; i < ax.count; ++i) {
        UniformModel m = cfg.spin;
        m.hbar = ax.value(i);
        const EigenDecomposition ed = eigh(build_h_spin(m.spin_params()));
        std::vector<Cell> row{Cell(m.hbar)};
        for (const double e : ed.values) row.push_back(Cell(e));
        t.rows.push_back(std::move(row));
    }
    emit(t, cfg.output);
}

void cmd_leakage(const RunConfig& cfg) {
    const GridAxis& ax = require_axis(cfg, "t");
    std::vector<double> times;
    times.reserve(static_cast<size_t>(ax.count));
    for (int i = 0; i < ax.count; ++i) times.push_back(ax.value(i));
    const LeakageTrace tr = leakage_trace(cfg.spin.spin_params(), times, LeakageMode::AVERAGE);
    Table t;
    t.header = {"t_ns", "leakage"};
    for (size_t i = 0; i < tr.times.size(); ++i)
        t.rows.push_back({Cell(tr.times[i]), Cell(tr.values[i])});
    emit(t, cfg.output);
}

void cmd_jphi(const RunConfig& cfg) {
    const GridAxis& ax = require_axis(cfg, "phi");
    Table t;
    t.header = {"phi", "j_eff"};
    for (int i = 0; i < ax.count; ++i) {
        const double phi = ax.value(i);
        t.rows.push_back({Cell(phi), Cell(j_of_phi(cfg.spin.jsc, phi))});
    }
    emit(t, cfg.output);
}

void cmd_fidelity(const RunConfig& cfg) {
    if (cfg.sweep.empty()) throw ConfigError("config: 'fidelity' requires at least one sweep axis");
    const std::vector<FidelityRow> rows = fidelity_map(cfg.spin, cfg.sweep, cfg.workers);
    Table t;
    for (const auto& ax : cfg.sweep) t.header.push_back(ax.name);
    t.header.insert(t.header.end(),
                    {"t_gate_ns", "infidelity_raw", "infidelity_opt", "leakage_max", "error"});
    for (const auto& r : rows) {
        std::vector<Cell> row;
        for (const double c : r.coords) row.push_back(Cell(c));
        if (r.ok) {
            row.push_back(Cell(r.report.t_gate));
            row.push_back(Cell(1.0 - r.report.fidelity_raw));
            row.push_back(Cell(r.report.infidelity));
            row.push_back(Cell(r.report.leakage_max));
            row.push_back(Cell(std::string()));
        } else {
            row.insert(row.end(), {Cell("nan"), Cell("nan"), Cell("nan"), Cell("nan")});
            row.push_back(Cell(r.error));
        }
        t.rows.push_back(std::move(row));
    }
    emit(t, cfg.output);
}

void cmd_sw_verify(const RunConfig& cfg) {
    const HubbardParams base = cfg.hubbard_params();
    constexpr int levels = 3;
    const CouplingVariant variants[2] = {CouplingVariant::MAIN, CouplingVariant::SM};
    double mismatch[2][levels];
    for (int lev = 0; lev < levels; ++lev) {
        const double s = std::ldexp(1.0, -lev); // 1, 1/2, 1/4
        HubbardParams p = base;
        p.t1 *= s;
        p.t2 *= s;
        p.gamma_ca *= s;
        const Matrix numeric = exact_reduce_to_spin_sector(p).traceless();
        for (int v = 0; v < 2; ++v) {
            const Matrix analytic =
                build_h_spin(spin_params_from_hubbard(p, variants[v])).traceless();
            mismatch[v][lev] = (numeric - analytic).frobenius_norm();
        }
    }
    // least-squares slope of log2(mismatch) against refinement level
    const auto fitted_order = [&](const double* m) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int lev = 0; lev < levels; ++lev) {
            const double x = -lev; // log2 of the tunneling scale
            const double y = std::log2(std::max(m[lev], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        return (levels * sxy - sx * sy) / (levels * sxx - sx * sx);
    };
    const int winner = (mismatch[0][levels - 1] <= mismatch[1][levels - 1]) ? 0 : 1;

    Table t;
    t.header = {"scale", "variant", "mismatch", "fitted_order", "winner"};
    for (int v = 0; v < 2; ++v)
        for (int lev = 0; lev < levels; ++lev)
            t.rows.push_back({Cell(std::ldexp(1.0, -lev)), std::string(to_string(variants[v])),
                              Cell(mismatch[v][lev]), Cell(fitted_order(mismatch[v])),
                              std::string(to_string(variants[winner]))});
    emit(t, cfg.output);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stc: singlet-triplet coupler simulation toolkit"};
    app.set_version_flag("--version",
                         std::string("stc 1.0.0\nconstants:\n  hbar = ") + fmt17(hbar_ueV_ns) +
                             " ueV*ns\n  pi   = " + fmt17(pi) +
                             "\nunits: energy ueV, time ns, angle rad");
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format;
    int workers = 0;

    const std::vector<std::pair<std::string, void (*)(const RunConfig&)>> commands = {
        {"couplings", cmd_couplings}, {"gammas", cmd_gammas}, {"spectrum", cmd_spectrum},
        {"leakage", cmd_leakage},     {"jphi", cmd_jphi},     {"fidelity", cmd_fidelity},
        {"sw-verify", cmd_sw_verify},
    };
    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration file (JSON)")->required();
        sub->add_option("--out", out_path, "output file path (default: config, else stdout)");
        sub->add_option("--format", format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--workers", workers, "worker threads for sweeps")
            ->check(CLI::PositiveNumber);
        sub->callback([&, fn] {
            RunConfig cfg = load_config(config_path);
            if (!out_path.empty()) cfg.output.path = out_path;
            if (!format.empty()) cfg.output.format = format;
            if (workers > 0) cfg.workers = workers;
            fn(cfg);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // 0 for --help/--version
        return code == 0 ? 0 : 1;     // any usage problem is a config error
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
