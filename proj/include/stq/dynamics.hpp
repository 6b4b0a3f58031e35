#ifndef STQ_DYNAMICS_HPP
#define STQ_DYNAMICS_HPP

#include <array>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "stq/constants.hpp"
#include "stq/eig.hpp"
#include "stq/matrix.hpp"
#include "stq/spin_model.hpp"
#include "stq/st_effective.hpp"

namespace stq {

/// Indices of the computational states {|udud>, |uddu>, |duud>, |dudu>}
/// inside the 16-dim four-spin space (spin up = 0, index s1*8+s2*4+s3*2+s4).
inline constexpr std::array<int, 4> computational_indices{5, 6, 9, 10};
/// The two S_z = 0 leakage states |uudd> and |dduu>.
inline constexpr std::array<int, 2> leakage_indices{3, 12};

/// Headline output record of a cZ gate simulation.
struct GateReport {
    double t_gate = 0.0;            // ns
    double fidelity_raw = 0.0;      // trace fidelity, no single-qubit correction
    double fidelity_optimized = 0.0; // maximized over local z-rotations
    double infidelity = 0.0;        // 1 - fidelity_optimized
    double leakage_max = 0.0;       // max over the gate window
    double leakage_final = 0.0;     // at t = t_gate
};

enum class LeakageMode { AVERAGE, SINGLE };

/// Leakage L(t) sampled on an ascending time grid. AVERAGE mode averages
/// over the four computational initial states; SINGLE starts from one of them.
struct LeakageTrace {
    std::vector<double> times;  // ns
    std::vector<double> values; // in [0, 1]
    LeakageMode mode = LeakageMode::AVERAGE;
    int state = -1; // computational state index in SINGLE mode
};

/// T_g = pi hbar / |j_eff| — the time for the Ising coupling to accumulate
/// the conditional pi phase of a cZ gate.
inline double gate_time(double j_eff) {
    if (std::abs(j_eff) < 1e-15)
        throw ZeroCoupling("gate_time: |j_eff| < 1e-15 ueV, gate time diverges");
    return pi * hbar_ueV_ns / std::abs(j_eff);
}

namespace detail {

// Propagator at time t from a precomputed eigendecomposition.
inline Matrix propagator(const EigenDecomposition& ed, double t_ns) {
    const int n = ed.vectors.dim();
    Matrix d(n);
    for (int i = 0; i < n; ++i) {
        const double phase = -ed.values[static_cast<size_t>(i)] * t_ns / hbar_ueV_ns;
        d(i, i) = cplx(std::cos(phase), std::sin(phase));
    }
    return ed.vectors * d * ed.vectors.dagger();
}

// Leakage out of the computational subspace for the evolution u (16-dim).
inline double leakage_of(const Matrix& u, LeakageMode mode, int state) {
    if (mode == LeakageMode::AVERAGE) {
        double kept = 0.0;
        for (const int r : computational_indices)
            for (const int c : computational_indices) kept += std::norm(u(r, c));
        return std::max(0.0, 1.0 - kept / 4.0);
    }
    const int c = computational_indices[static_cast<size_t>(state)];
    double kept = 0.0;
    for (const int r : computational_indices) kept += std::norm(u(r, c));
    return std::max(0.0, 1.0 - kept);
}

} // namespace detail

inline LeakageTrace leakage_trace(const SpinParams& p, const std::vector<double>& times,
                                  LeakageMode mode = LeakageMode::AVERAGE, int state = 0) {
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
            throw std::invalid_argument("leakage_trace: times must be ascending and nonnegative");
    }
    if (mode == LeakageMode::SINGLE && (state < 0 || state > 3))
        throw std::invalid_argument("leakage_trace: state index must be in 0..3");
    const EigenDecomposition ed = eigh(build_h_spin(p));
    LeakageTrace out;
    out.times = times;
    out.mode = mode;
    out.state = (mode == LeakageMode::SINGLE) ? state : -1;
    out.values.reserve(times.size());
    for (const double t : times)
        out.values.push_back(detail::leakage_of(detail::propagator(ed, t), mode, state));
    return out;
}

/// Diagonal of the target gate U_cZ = exp(-i pi tauz1 tauz2 / 4).
inline std::array<cplx, 4> cz_diagonal() {
    const cplx m(std::cos(pi / 4.0), -std::sin(pi / 4.0));
    return {m, std::conj(m), std::conj(m), m};
}

/// Trace fidelities of a (generally non-unitary) 4x4 computational-block
/// propagator against the cZ gate: raw F = |tr(U_cZ^dag U)/4|^2, and the
/// maximum over local z-rotations exp(i a tauz1/2) exp(i b tauz2/2).
/// The trace is a four-term phase sum linear in (a, b); maximized on a
/// 64x64 grid followed by Newton refinement to 1e-12 gradient norm.
inline std::pair<double, double> cz_trace_fidelities(const Matrix& u4) {
    const std::array<cplx, 4> cz = cz_diagonal();
    cplx tr_raw = 0.0;
    for (int k = 0; k < 4; ++k) tr_raw += std::conj(cz[static_cast<size_t>(k)]) * u4(k, k);
    const double f_raw = std::norm(tr_raw) / 16.0;

    // weights of e^{i(ak*a + bk*b)} with (ak, bk) = (+-1/2, +-1/2)
    std::array<cplx, 4> w;
    for (int k = 0; k < 4; ++k) w[static_cast<size_t>(k)] = std::conj(cz[static_cast<size_t>(k)]) * u4(k, k);
    constexpr double ak[4] = {0.5, 0.5, -0.5, -0.5};
    constexpr double bk[4] = {0.5, -0.5, 0.5, -0.5};

    const auto trace_at = [&](double a, double b) {
        cplx t = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double ph = ak[k] * a + bk[k] * b;
            t += w[static_cast<size_t>(k)] * cplx(std::cos(ph), std::sin(ph));
        }
        return t;
    };

    double best_a = 0.0, best_b = 0.0, best_f = std::norm(trace_at(0.0, 0.0));
    constexpr int ngrid = 64;
    for (int i = 0; i < ngrid; ++i)
        for (int j = 0; j < ngrid; ++j) {
            const double a = 2.0 * pi * i / ngrid;
            const double b = 2.0 * pi * j / ngrid;
            const double f = std::norm(trace_at(a, b));
            if (f > best_f) {
                best_f = f;
                best_a = a;
                best_b = b;
            }
        }

    // Newton ascent on |T|^2; derivatives of T are analytic.
    double a = best_a, b = best_b;
    for (int it = 0; it < 60; ++it) {
        cplx t = 0.0, ta = 0.0, tb = 0.0, taa = 0.0, tab = 0.0, tbb = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double ph = ak[k] * a + bk[k] * b;
            const cplx e = w[static_cast<size_t>(k)] * cplx(std::cos(ph), std::sin(ph));
            const cplx i_e = cplx(0.0, 1.0) * e;
            t += e;
            ta += ak[k] * i_e;
            tb += bk[k] * i_e;
            taa -= ak[k] * ak[k] * e;
            tab -= ak[k] * bk[k] * e;
            tbb -= bk[k] * bk[k] * e;
        }
        const double ga = 2.0 * std::real(std::conj(t) * ta);
        const double gb = 2.0 * std::real(std::conj(t) * tb);
        const double gnorm = std::sqrt(ga * ga + gb * gb);
        if (gnorm < 1e-12) break;
        const double haa = 2.0 * (std::norm(ta) + std::real(std::conj(t) * taa));
        const double hab = 2.0 * (std::real(std::conj(ta) * tb) + std::real(std::conj(t) * tab));
        const double hbb = 2.0 * (std::norm(tb) + std::real(std::conj(t) * tbb));
        const double det = haa * hbb - hab * hab;
        double da, db;
        if (std::abs(det) > 1e-300 && haa < 0.0 && det > 0.0) {
            da = -(hbb * ga - hab * gb) / det;
            db = -(-hab * ga + haa * gb) / det;
        } else {
            da = 0.1 * ga; // fall back to gradient ascent away from the maximum
            db = 0.1 * gb;
        }
        const double fa = std::norm(trace_at(a + da, b + db));
        if (fa >= std::norm(trace_at(a, b))) {
            a += da;
            b += db;
        } else {
            a += 0.1 * ga;
            b += 0.1 * gb;
        }
    }
    const double f_opt = std::max({std::norm(trace_at(a, b)), best_f, std::norm(tr_raw)}) / 16.0;
    return {f_raw, f_opt};
}

/// Simulate a cZ gate: evolve the full 16-dim model for T_g set by the
/// analytic Ising coupling jsc * gamma_par, project onto the computational
/// block, and score against the target. Leakage is sampled on
/// `leakage_samples` equidistant times across the gate window.
inline GateReport cz_fidelity(const SpinParams& p, int leakage_samples = 101) {
    const double jzz = p.jsc * gamma_parallel(p.rotsc.angle, p.rotsc.theta());
    GateReport rep;
    rep.t_gate = gate_time(jzz);

    const EigenDecomposition ed = eigh(build_h_spin(p));
    const Matrix u_full = detail::propagator(ed, rep.t_gate);
    Matrix u4(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            u4(i, j) = u_full(computational_indices[static_cast<size_t>(i)],
                              computational_indices[static_cast<size_t>(j)]);

    const auto [f_raw, f_opt] = cz_trace_fidelities(u4);
    rep.fidelity_raw = f_raw;
    rep.fidelity_optimized = f_opt;
    rep.infidelity = 1.0 - f_opt;
    rep.leakage_final = detail::leakage_of(u_full, LeakageMode::AVERAGE, 0);
    rep.leakage_max = 0.0;
    for (int s = 0; s < leakage_samples; ++s) {
        const double t = rep.t_gate * s / (leakage_samples - 1);
        rep.leakage_max = std::max(
            rep.leakage_max, detail::leakage_of(detail::propagator(ed, t), LeakageMode::AVERAGE, 0));
    }
    return rep;
}

/// Uniform-device parameter bundle used by the sweep runner; the junction
/// flag replaces jsc by the phase-tunable 4 jsc cos^2(phi/2).
struct UniformModel {
    double hbar = 20.0;
    double dh = 0.0;
    double dh1 = 0.0;
    double dh2 = 0.0;
    double j1 = 0.0;
    double j2 = 0.0;
    double jsc = 0.4;
    double phi_so = pi / 2.0;
    double theta = pi / 2.0;
    bool junction = false;
    double phi = 0.0;

    double jsc_eff() const { return junction ? j_of_phi(jsc, phi) : jsc; }

    SpinParams spin_params() const {
        return make_uniform_spin_params(hbar, dh, dh1, dh2, j1, j2, jsc_eff(), phi_so, theta);
    }

    /// Assign a sweepable parameter by axis name.
    void set(const std::string& name, double value) {
        if (name == "phi_so" || name == "Phi_so") phi_so = value;
        else if (name == "theta") theta = value;
        else if (name == "dh") dh = value;
        else if (name == "hbar") hbar = value;
        else if (name == "phi") { phi = value; junction = true; }
        else throw std::invalid_argument("unknown sweep axis '" + name +
                                         "' (expected phi_so, theta, dh, hbar, or phi)");
    }
};

/// One sweep axis: `count` equidistant values from start to stop inclusive.
struct GridAxis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;

    double value(int i) const {
        if (count <= 1) return start;
        return start + (stop - start) * i / (count - 1);
    }
};

/// One grid point of a fidelity map; `error` is set (and the report left
/// zeroed) when the evaluation failed, without aborting the sweep.
struct FidelityRow {
    std::vector<double> coords;
    GateReport report;
    std::string error;
    bool ok = false;
};

/// Evaluate cz_fidelity over a row-major grid, optionally with a bounded
/// worker pool. Rows are index-addressed, so the output order is the
/// deterministic row-major grid order for any worker count.
inline std::vector<FidelityRow> fidelity_map(const UniformModel& base,
                                             const std::vector<GridAxis>& axes, int workers = 1) {
    if (axes.empty()) throw std::invalid_argument("fidelity_map: at least one axis required");
    size_t total = 1;
    for (const auto& ax : axes) {
        if (ax.count < 1) throw std::invalid_argument("fidelity_map: axis count must be >= 1");
        total *= static_cast<size_t>(ax.count);
    }
    std::vector<FidelityRow> rows(total);

    const auto eval_point = [&](size_t flat) {
        FidelityRow& row = rows[flat];
        UniformModel m = base;
        size_t rem = flat;
        row.coords.resize(axes.size());
        for (size_t a = axes.size(); a-- > 0;) {
            const int i = static_cast<int>(rem % static_cast<size_t>(axes[a].count));
            rem /= static_cast<size_t>(axes[a].count);
            row.coords[a] = axes[a].value(i);
        }
        try {
            for (size_t a = 0; a < axes.size(); ++a) m.set(axes[a].name, row.coords[a]);
            row.report = cz_fidelity(m.spin_params());
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const int nw = std::max(1, std::min<int>(workers, static_cast<int>(total)));
    if (nw == 1) {
        for (size_t i = 0; i < total; ++i) eval_point(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nw));
        for (int w = 0; w < nw; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) eval_point(i);
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

} // namespace stq

#endif
