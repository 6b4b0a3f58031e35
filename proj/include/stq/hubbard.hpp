#ifndef STQ_HUBBARD_HPP
#define STQ_HUBBARD_HPP

#include <array>
#include <bit>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "stq/constants.hpp"
#include "stq/eig.hpp"
#include "stq/matrix.hpp"
#include "stq/rotation.hpp"
#include "stq/spin_model.hpp"

namespace stq {

/// Parameters of the four-dot Fermi-Hubbard model with crossed-Andreev
/// pairing between dots 2 and 3. Energies in ueV, phases in radians.
struct HubbardParams {
    std::array<double, 4> eps{};  // dot energies, negative (below chemical potential)
    double u = 0.0;               // on-site Coulomb repulsion
    bool u_infinite = false;      // infinite-U mode: doubly occupied states removed
    double t1 = 0.0;              // tunneling dot1 <-> dot2
    double t2 = 0.0;              // tunneling dot3 <-> dot4
    double gamma_ca = 0.0;        // |Gamma_CA|
    double phi_u = 0.0;           // superconducting phases (junction mode)
    double phi_l = 0.0;
    bool single_sc = true;        // one superconductor vs Josephson junction
    Rotation3 rot1;               // U1, bond 1-2
    Rotation3 rot2;               // U2, bond 3-4
    Rotation3 rot_ca;             // combined U = U_{j3} U_{j2}, bond 2-3
    std::array<Vec3, 4> h{};      // Zeeman vectors

    double h_mag(int alpha) const { return norm(h[static_cast<size_t>(alpha)]); }

    /// Effective pairing amplitude entering H_CA.
    cplx gamma_eff() const {
        if (single_sc) return cplx(gamma_ca, 0.0);
        const double phi = phi_u - phi_l;
        const double mean = (phi_u + phi_l) / 2.0;
        return 2.0 * gamma_ca * std::cos(phi / 2.0) * cplx(std::cos(mean), -std::sin(mean));
    }

    void check_occupation_window() const {
        for (int a = 0; a < 4; ++a) {
            const double e = eps[static_cast<size_t>(a)];
            const double hm = h_mag(a);
            const bool lower = (-e - hm / 2.0 > 0.0) && (-e + hm / 2.0 > 0.0);
            const bool upper = u_infinite || ((-e - hm / 2.0 < u) && (-e + hm / 2.0 < u));
            if (!lower || !upper)
                throw OccupationWindowViolated(
                    "dot " + std::to_string(a + 1) +
                    ": single-occupation window 0 < -eps +- h/2 < U violated");
        }
    }

    /// True when the tunnelings are small enough for the perturbative
    /// reduction to the spin model to be trustworthy.
    bool perturbative_regime() const {
        double scale = u_infinite ? 1e300 : u;
        for (int a = 0; a < 4; ++a) {
            scale = std::min(scale, std::abs(eps[static_cast<size_t>(a)]));
            if (!u_infinite) scale = std::min(scale, u - std::abs(eps[static_cast<size_t>(a)]));
            scale = std::min(scale, h_mag(a));
        }
        const double tmax = std::max({t1, t2, std::abs(gamma_ca)});
        return tmax <= 0.1 * scale;
    }
};

/// Occupation-number basis on 8 fermionic modes ordered
/// (1u, 1d, 2u, 2d, 3u, 3d, 4u, 4d); mode 2*dot + spin, spin up = 0.
/// States are bitstrings with bit m set when mode m is occupied; creation
/// operators pick up the parity of the occupied modes below m, so that
/// product states built from the highest mode down carry a plus sign.
class FockBasis {
  public:
    explicit FockBasis(bool exclude_double_occupation) {
        index_of_.assign(256, -1);
        for (int s = 0; s < 256; ++s) {
            if (exclude_double_occupation) {
                bool doubly = false;
                for (int dot = 0; dot < 4; ++dot)
                    if ((s >> (2 * dot) & 1) && (s >> (2 * dot + 1) & 1)) doubly = true;
                if (doubly) continue;
            }
            index_of_[static_cast<size_t>(s)] = static_cast<int>(states_.size());
            states_.push_back(s);
        }
    }

    int size() const { return static_cast<int>(states_.size()); }
    int state(int idx) const { return states_[static_cast<size_t>(idx)]; }
    int index_of(int bits) const { return index_of_[static_cast<size_t>(bits)]; }

    static int mode(int dot, int spin) { return 2 * dot + spin; }

    /// Apply c^dag_m (create = true) or c_m to a bitstring. Returns the
    /// resulting bitstring and accumulates the fermionic sign; -1 when the
    /// action annihilates the state.
    static int apply(int bits, int m, bool create, int& sign) {
        const bool occupied = (bits >> m) & 1;
        if (create == occupied) return -1;
        if (std::popcount(static_cast<unsigned>(bits) & ((1u << m) - 1u)) & 1) sign = -sign;
        return bits ^ (1 << m);
    }

    /// Indices of the 16 singly-occupied states ordered like the spin model:
    /// index s1*8 + s2*4 + s3*2 + s4 with spin up = 0.
    std::vector<int> single_occupation_sector() const {
        std::vector<int> idx;
        idx.reserve(16);
        for (int spins = 0; spins < 16; ++spins) {
            int bits = 0;
            for (int dot = 0; dot < 4; ++dot) {
                const int s = (spins >> (3 - dot)) & 1;
                bits |= 1 << mode(dot, s);
            }
            idx.push_back(index_of(bits));
        }
        return idx;
    }

  private:
    std::vector<int> states_;
    std::vector<int> index_of_;
};

namespace detail {

// H += coeff * op_k ... op_1 (ops applied right to left) + H.c.
// Each op is (mode, create). `add_hc` false for Hermitian diagonal terms.
inline void add_fermion_term(Matrix& h, const FockBasis& basis, cplx coeff,
                             std::initializer_list<std::pair<int, bool>> ops, bool add_hc = true) {
    if (coeff == 0.0) return;
    for (int col = 0; col < basis.size(); ++col) {
        int bits = basis.state(col);
        int sign = 1;
        bool dead = false;
        for (auto it = std::rbegin(ops); it != std::rend(ops); ++it) {
            bits = FockBasis::apply(bits, it->first, it->second, sign);
            if (bits < 0) {
                dead = true;
                break;
            }
        }
        if (dead) continue;
        const int row = basis.index_of(bits);
        if (row < 0) continue; // outside the (infinite-U) basis
        const cplx v = coeff * static_cast<double>(sign);
        h(row, col) += v;
        if (add_hc) h(col, row) += std::conj(v);
    }
}

} // namespace detail

/// Dense Hamiltonian H_DQD + H_CA on the Fock basis (256-dim, or 81-dim in
/// infinite-U mode). Conserves total fermion parity.
inline Matrix build_h_dot(const HubbardParams& p, const FockBasis& basis) {
    p.check_occupation_window();
    const int n = basis.size();
    Matrix h = Matrix::zero(n);

    // diagonal part: dot energies and Coulomb repulsion
    for (int col = 0; col < n; ++col) {
        const int bits = basis.state(col);
        double e = 0.0;
        for (int dot = 0; dot < 4; ++dot) {
            const bool up = (bits >> FockBasis::mode(dot, 0)) & 1;
            const bool dn = (bits >> FockBasis::mode(dot, 1)) & 1;
            e += p.eps[static_cast<size_t>(dot)] * (static_cast<int>(up) + static_cast<int>(dn));
            if (up && dn) e += p.u;
        }
        h(col, col) += e;
    }
    // Zeeman term, (h_a . sigma)_{ss'} d^dag_{a s} d_{a s'} / 2
    for (int dot = 0; dot < 4; ++dot) {
        const Vec3& hv = p.h[static_cast<size_t>(dot)];
        for (int s = 0; s < 2; ++s)
            for (int sp = 0; sp < 2; ++sp) {
                cplx amp = 0.0;
                for (int a = 0; a < 3; ++a) amp += 0.5 * hv[static_cast<size_t>(a)] * pauli(a)(s, sp);
                detail::add_fermion_term(h, basis, amp,
                                         {{FockBasis::mode(dot, s), true}, {FockBasis::mode(dot, sp), false}},
                                         /*add_hc=*/false);
            }
    }
    // spin-rotated tunneling: t1 U1 d2^dag d1 + t2 U2 d4^dag d3 + H.c.
    const Matrix u1 = spin_flip_unitary(p.rot1);
    const Matrix u2 = spin_flip_unitary(p.rot2);
    for (int s = 0; s < 2; ++s)
        for (int sp = 0; sp < 2; ++sp) {
            detail::add_fermion_term(h, basis, p.t1 * u1(s, sp),
                                     {{FockBasis::mode(1, s), true}, {FockBasis::mode(0, sp), false}});
            detail::add_fermion_term(h, basis, p.t2 * u2(s, sp),
                                     {{FockBasis::mode(3, s), true}, {FockBasis::mode(2, sp), false}});
        }
    // crossed-Andreev pairing: Gamma_eff (d2^dag)^T U^dag (-d3d^dag, d3u^dag) + H.c.
    const Matrix uca_dag = spin_flip_unitary(p.rot_ca).dagger();
    const cplx gamma = p.gamma_eff();
    for (int s = 0; s < 2; ++s)
        for (int sp = 0; sp < 2; ++sp) {
            const double pair_sign = (sp == 0) ? -1.0 : 1.0;
            const int mode3 = FockBasis::mode(2, 1 - sp); // (-d3d, d3u)
            detail::add_fermion_term(h, basis, gamma * uca_dag(s, sp) * pair_sign,
                                     {{FockBasis::mode(1, s), true}, {mode3, true}});
        }
    return h;
}

/// Generic second-order quasidegenerate reduction:
///   <m|H_eff|m'> = <m|H0 + V|m'>
///                + 1/2 sum_l <m|V|l><l|V|m'> (1/(Em - El) + 1/(Em' - El)).
/// h0 must be diagonal in the supplied basis; `subspace` lists the retained
/// indices in output order.
inline Matrix schrieffer_wolff2(const Matrix& h0, const Matrix& v, std::span<const int> subspace) {
    const int n = h0.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && h0(i, j) != 0.0)
                throw std::invalid_argument("schrieffer_wolff2: h0 must be diagonal in the supplied basis");

    std::vector<char> in_sub(static_cast<size_t>(n), 0);
    for (const int m : subspace) in_sub[static_cast<size_t>(m)] = 1;
    std::vector<double> e(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) e[static_cast<size_t>(i)] = h0(i, i).real();

    const int ns = static_cast<int>(subspace.size());
    Matrix out(ns);
    for (int a = 0; a < ns; ++a) {
        const int m = subspace[static_cast<size_t>(a)];
        for (int b = 0; b < ns; ++b) {
            const int mp = subspace[static_cast<size_t>(b)];
            cplx val = h0(m, mp) + v(m, mp);
            for (int l = 0; l < n; ++l) {
                if (in_sub[static_cast<size_t>(l)]) continue;
                const cplx vml = v(m, l);
                const cplx vlm = v(l, mp);
                if (vml == 0.0 || vlm == 0.0) continue;
                const double dm = e[static_cast<size_t>(m)] - e[static_cast<size_t>(l)];
                const double dmp = e[static_cast<size_t>(mp)] - e[static_cast<size_t>(l)];
                if (std::abs(dm) < 1e-9 || std::abs(dmp) < 1e-9)
                    throw DegenerateCrossing(
                        "schrieffer_wolff2: subspace state degenerate with excluded state");
                val += 0.5 * vml * vlm * (1.0 / dm + 1.0 / dmp);
            }
            out(a, b) = val;
        }
    }
    // symmetrize away roundoff asymmetry
    Matrix sym = (out + out.dagger()) * cplx(0.5, 0.0);
    return sym;
}

/// Full-model reduction to the 16-dim singly-occupied sector, ordered like
/// the spin model. The diagonal (H0) part is everything but tunneling and
/// pairing; requires z-aligned Zeeman fields.
inline Matrix sw_reduce_to_spin_sector(const HubbardParams& p) {
    for (const auto& hv : p.h)
        if (hv[0] != 0.0 || hv[1] != 0.0)
            throw UnalignedZeeman("sw_reduce_to_spin_sector: Zeeman fields must be z-aligned");
    const FockBasis basis(p.u_infinite);
    const Matrix h = build_h_dot(p, basis);
    HubbardParams p0 = p;
    p0.t1 = p0.t2 = p0.gamma_ca = 0.0;
    const Matrix h0 = build_h_dot(p0, basis);
    const Matrix v = h - h0;
    const std::vector<int> sector = basis.single_occupation_sector();
    return schrieffer_wolff2(h0, v, sector);
}

/// Exact (all-orders) effective Hamiltonian on the singly-occupied sector:
/// diagonalize the full model, keep the 16 eigenstates with the largest
/// weight in the sector, project them onto it and orthonormalize the
/// projections symmetrically. Agrees with the second-order reduction up to
/// higher orders in the tunneling, so the difference from the analytic spin
/// model scales as the fourth power of the tunneling scale (odd orders
/// vanish by charge structure).
inline Matrix exact_reduce_to_spin_sector(const HubbardParams& p) {
    for (const auto& hv : p.h)
        if (hv[0] != 0.0 || hv[1] != 0.0)
            throw UnalignedZeeman("exact_reduce_to_spin_sector: Zeeman fields must be z-aligned");
    const FockBasis basis(p.u_infinite);
    const EigenDecomposition ed = eigh(build_h_dot(p, basis));
    const std::vector<int> sector = basis.single_occupation_sector();
    const int n = basis.size();

    std::vector<std::pair<double, int>> weight(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        double w = 0.0;
        for (const int i : sector) w += std::norm(ed.vectors(i, k));
        weight[static_cast<size_t>(k)] = {-w, k};
    }
    std::sort(weight.begin(), weight.end());
    std::vector<int> chosen;
    chosen.reserve(16);
    for (int j = 0; j < 16; ++j) chosen.push_back(weight[static_cast<size_t>(j)].second);
    std::sort(chosen.begin(), chosen.end());

    Matrix a(16); // sector components of the chosen eigenvectors
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) a(i, j) = ed.vectors(sector[static_cast<size_t>(i)], chosen[static_cast<size_t>(j)]);

    const Matrix overlap = a.dagger() * a;
    const EigenDecomposition eo = eigh(overlap);
    Matrix isqrt(16);
    for (int i = 0; i < 16; ++i) {
        if (eo.values[static_cast<size_t>(i)] <= 1e-12)
            throw DegenerateCrossing(
                "exact_reduce_to_spin_sector: retained eigenstates barely overlap the sector");
        isqrt(i, i) = 1.0 / std::sqrt(eo.values[static_cast<size_t>(i)]);
    }
    const Matrix b = a * (eo.vectors * isqrt * eo.vectors.dagger());
    Matrix lam(16);
    for (int j = 0; j < 16; ++j) lam(j, j) = ed.values[static_cast<size_t>(chosen[static_cast<size_t>(j)])];
    return b * lam * b.dagger();
}

/// Analytic exchange-coupling variants. MAIN and SM differ in the
/// denominator of the crossed-Andreev coupling. INFINITE_U is the printed
/// large-Coulomb closed form -4|Gamma|^2/(eps2+eps3); note it equals the
/// U -> infinity limit of SM, while the limit of MAIN (the variant the
/// exact reduction favors at finite U) is half of it.
enum class CouplingVariant { MAIN, SM, INFINITE_U };

inline const char* to_string(CouplingVariant v) {
    switch (v) {
        case CouplingVariant::MAIN: return "MAIN";
        case CouplingVariant::SM: return "SM";
        default: return "INFINITE_U";
    }
}

struct ExchangeCouplings {
    double j1 = 0.0;
    double j2 = 0.0;
    double jsc = 0.0;
};

/// J_i = 4 t_i^2 U / (U^2 - eps_tilde_i^2) and the crossed-Andreev coupling
/// per variant; junction mode contributes the cos^2(phi/2) switch through
/// |Gamma_eff|^2 = 4 |Gamma_CA|^2 cos^2(phi/2).
inline ExchangeCouplings exchange_couplings(const HubbardParams& p, CouplingVariant variant) {
    ExchangeCouplings out;
    const double et1 = p.eps[0] - p.eps[1];
    const double et2 = p.eps[2] - p.eps[3];
    const double esum = p.eps[1] + p.eps[2];
    const double tiny = 1e-12;

    if (!p.u_infinite) {
        const double d1 = p.u * p.u - et1 * et1;
        const double d2 = p.u * p.u - et2 * et2;
        if (std::abs(d1) < tiny * p.u * p.u)
            throw ResonantDenominator("exchange_couplings: U^2 - eps_tilde_1^2 vanishes");
        if (std::abs(d2) < tiny * p.u * p.u)
            throw ResonantDenominator("exchange_couplings: U^2 - eps_tilde_2^2 vanishes");
        out.j1 = 4.0 * p.t1 * p.t1 * p.u / d1;
        out.j2 = 4.0 * p.t2 * p.t2 * p.u / d2;
    }

    const double g2 = std::norm(p.gamma_eff());
    const double scale = std::max({std::abs(esum), p.u_infinite ? 0.0 : p.u, 1.0});
    if (std::abs(esum) < tiny * scale)
        throw ResonantDenominator("exchange_couplings: eps_2 + eps_3 vanishes");
    if (p.u_infinite || variant == CouplingVariant::INFINITE_U) {
        out.jsc = -4.0 * g2 / esum;
        return out;
    }
    const double denom =
        (variant == CouplingVariant::MAIN) ? (2.0 * p.u + esum) : (p.u + esum);
    if (std::abs(denom) < tiny * scale)
        throw ResonantDenominator(variant == CouplingVariant::MAIN
                                      ? "exchange_couplings: 2U + eps_2 + eps_3 vanishes"
                                      : "exchange_couplings: U + eps_2 + eps_3 vanishes");
    out.jsc = -4.0 * g2 * p.u / (esum * denom);
    return out;
}

/// Spin-model parameters implied by a Hubbard parameter set.
inline SpinParams spin_params_from_hubbard(const HubbardParams& p, CouplingVariant variant) {
    const ExchangeCouplings c = exchange_couplings(p, variant);
    SpinParams out;
    out.h = p.h;
    out.j1 = c.j1;
    out.j2 = c.j2;
    out.jsc = c.jsc;
    out.rot1 = p.rot1;
    out.rot2 = p.rot2;
    out.rotsc = p.rot_ca;
    return out;
}

/// Pairing amplitude from microscopic superconductor parameters:
/// Gamma = 2 t_s^2 rho_F arctan(W / Delta) * exp(-2 w / xi).
/// The wide-band limit W -> infinity gives pi t_s^2 rho_F.
inline double gamma_ca_from_tunneling(double t_s, double rho_f, double delta, double bandwidth,
                                      std::optional<double> w_over_xi = std::nullopt) {
    double gamma = 2.0 * t_s * t_s * rho_f * std::atan(bandwidth / delta);
    if (w_over_xi) gamma *= std::exp(-2.0 * *w_over_xi);
    return gamma;
}

} // namespace stq

#endif
