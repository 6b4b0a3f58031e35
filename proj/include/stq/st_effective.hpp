#ifndef STQ_ST_EFFECTIVE_HPP
#define STQ_ST_EFFECTIVE_HPP

#include <array>
#include <cmath>
#include <complex>

#include "stq/matrix.hpp"
#include "stq/spin_model.hpp"

namespace stq {

/// Anisotropy of the projected exchange, gamma_par = 2 sin^2(theta) sin^2(phi/2) - 1.
/// Equals -1 in the isotropic limit and +1 at (phi, theta) = (pi, pi/2).
inline double gamma_parallel(double phi, double theta) {
    const double st = std::sin(theta);
    const double sp = std::sin(phi / 2.0);
    return 2.0 * st * st * sp * sp - 1.0;
}

/// Leakage coupling factor, gamma_perp = [cos(phi/2) + i cos(theta) sin(phi/2)]^2.
/// Vanishes at (pi, pi/2); satisfies 2|gamma_perp| + gamma_par = 1.
inline cplx gamma_perp(double phi, double theta) {
    const cplx base(std::cos(phi / 2.0), std::cos(theta) * std::sin(phi / 2.0));
    return base * base;
}

/// Phase-tunable exchange of the Josephson-junction device, 4 jsc cos^2(phi/2).
inline double j_of_phi(double jsc, double phi) {
    const double c = std::cos(phi / 2.0);
    return 4.0 * jsc * c * c;
}

/// Effective two-qubit parameters: single-qubit fields and Ising coupling.
struct STParams {
    Vec3 b1{};
    Vec3 b2{};
    double jzz = 0.0; // jsc * gamma_par(Phi, theta)
};

/// Energies of the S_z = 0 leakage states and their coupling to the
/// computational space.
struct LeakageSpectrum {
    double e_leak_plus = 0.0;
    double e_leak_minus = 0.0;
    cplx coupling; // jsc * gamma_perp(Phi, theta) / 2
};

namespace detail {

inline void require_aligned(const SpinParams& p, const char* who) {
    if (!p.zeeman_aligned())
        throw UnalignedZeeman(std::string(who) +
                              ": Zeeman fields must be aligned with z (call gauge_align_zeeman first)");
}

} // namespace detail

/// Computational-space ST parameters of a z-aligned spin model.
inline STParams st_params(const SpinParams& p) {
    detail::require_aligned(p, "st_params");
    STParams out;
    const cplx g1 = gamma_perp(p.rot1.angle, p.rot1.theta());
    const cplx g2 = gamma_perp(p.rot2.angle, p.rot2.theta());
    out.b1 = Vec3{p.j1 * g1.real(), p.j1 * g1.imag(), p.dh1()};
    out.b2 = Vec3{p.j2 * g2.real(), p.j2 * g2.imag(), p.dh2()};
    out.jzz = p.jsc * gamma_parallel(p.rotsc.angle, p.rotsc.theta());
    return out;
}

/// Projected two-qubit Hamiltonian H_ST = B1.tau1/2 + B2.tau2/2 + (jzz/4) tauz tauz,
/// in the basis {|ud ud>, |ud du>, |du ud>, |du du>}. Equals the traceless part
/// of the exact projection of build_h_spin onto the computational space.
inline std::pair<Matrix, STParams> build_h_st(const SpinParams& p) {
    const STParams st = st_params(p);
    Matrix h = Matrix::zero(4);
    for (int a = 0; a < 3; ++a) {
        const Matrix ta = pauli(a);
        if (st.b1[static_cast<size_t>(a)] != 0.0)
            h += cplx(0.5 * st.b1[static_cast<size_t>(a)], 0.0) * kron(ta, Matrix::identity(2));
        if (st.b2[static_cast<size_t>(a)] != 0.0)
            h += cplx(0.5 * st.b2[static_cast<size_t>(a)], 0.0) * kron(Matrix::identity(2), ta);
    }
    h += cplx(st.jzz / 4.0, 0.0) * kron(pauli_z(), pauli_z());
    return {h, st};
}

/// Full S_z = 0 block: computational 4x4 extended by the leakage states
/// |uudd> and |dduu>. The computational <-> leakage coupling is
/// jsc gamma_perp / 2 in the pattern |00><L+| + |L-><11|, and the leakage
/// energies are E_leak(+-) relative to the computational zero of energy.
inline std::pair<Matrix, LeakageSpectrum> build_h_szero(const SpinParams& p) {
    auto [hst, st] = build_h_st(p);
    LeakageSpectrum spec;
    const double gp1 = gamma_parallel(p.rot1.angle, p.rot1.theta());
    const double gp2 = gamma_parallel(p.rot2.angle, p.rot2.theta());
    const double zee = (p.h_mag(0) + p.h_mag(1) - p.h_mag(2) - p.h_mag(3)) / 2.0;
    const double exch = -(p.j1 * gp1 + p.j2 * gp2) / 2.0 + st.jzz / 4.0;
    spec.e_leak_plus = zee + exch;
    spec.e_leak_minus = -zee + exch;
    spec.coupling = 0.5 * p.jsc * gamma_perp(p.rotsc.angle, p.rotsc.theta());

    Matrix h = Matrix::zero(6);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) h(i, j) = hst(i, j);
    h(0, 4) = spec.coupling;
    h(4, 0) = std::conj(spec.coupling);
    h(5, 3) = spec.coupling;
    h(3, 5) = std::conj(spec.coupling);
    h(4, 4) = spec.e_leak_plus;
    h(5, 5) = spec.e_leak_minus;
    return {h, spec};
}

/// Second-order corrections: computational <-> leakage matrix elements and
/// the non-Ising two-qubit couplings, as closed forms in the bond rotations.
/// Validated term by term against the numerical second-order reduction of
/// the 16-dim spin model (Zeeman part as the unperturbed Hamiltonian).
struct CorrectionTerms {
    // <00|H2|L+>, <01|H2|L+>, <10|H2|L+>, <11|H2|L+>; the |L-> column
    // follows by the -conjugate relations of the S_z = 0 block.
    std::array<cplx, 4> leak2{};
    double j_xz = 0.0, j_yz = 0.0, j_zx = 0.0, j_zy = 0.0;
    // helpers, exposed for inspection
    cplx gamma1, gamma2, beta_plus, beta_minus;
    double c_mix1 = 0.0, s_mix1 = 0.0, c_mix2 = 0.0, s_mix2 = 0.0;
};

inline CorrectionTerms second_order_corrections(const SpinParams& p) {
    detail::require_aligned(p, "second_order_corrections");
    for (int alpha = 0; alpha < 4; ++alpha)
        if (p.h_mag(alpha) <= 0.0)
            throw ZeroZeemanField("second_order_corrections: h_" + std::to_string(alpha + 1) +
                                  " must be positive");
    const double h1 = p.h_mag(0), h2 = p.h_mag(1), h3 = p.h_mag(2), h4 = p.h_mag(3);
    const Vec3& n1 = p.rot1.axis;
    const Vec3& n = p.rotsc.axis;
    const Vec3& n2 = p.rot2.axis;
    const double p1 = p.rot1.angle, ph = p.rotsc.angle, p2 = p.rot2.angle;

    const auto core = [](const Vec3& ax, double phi) {
        // (nx + i ny) sin(phi/2) (cos(phi/2) + i nz sin(phi/2))
        const double s = std::sin(phi / 2.0), c = std::cos(phi / 2.0);
        return cplx(ax[0], ax[1]) * s * cplx(c, ax[2] * s);
    };

    CorrectionTerms out;
    out.gamma1 = p.j1 * core(n1, p1);
    out.gamma2 = p.j2 * core(n2, p2);
    out.beta_plus = p.jsc * core(n, ph);
    out.beta_minus = p.jsc * cplx(n[0], -n[1]) * std::sin(ph / 2.0) *
                     cplx(std::cos(ph / 2.0), n[2] * std::sin(ph / 2.0));
    const cplx gamma1_neg = p.j1 * core(n1, -p1);

    out.leak2[0] =
        (1.0 / h2 + 1.0 / h3) / 4.0 * (out.beta_plus * std::conj(out.gamma2) + gamma1_neg * out.beta_minus);
    const double s_half = std::sin(ph / 2.0);
    const cplx npl(n[0], n[1]);
    const cplx n2mi(n2[0], -n2[1]);
    const cplx n1pl(n1[0], n1[1]);
    out.leak2[1] = -(1.0 / (h2 + h3) + 1.0 / (h3 + h4)) / 8.0 * p.jsc * p.j2 * npl * npl * n2mi *
                   n2mi * s_half * s_half * std::sin(p2 / 2.0) * std::sin(p2 / 2.0);
    out.leak2[2] = (1.0 / (h1 + h2) + 1.0 / (h2 + h3)) / 8.0 * p.jsc * p.j1 * std::conj(npl) *
                   std::conj(npl) * n1pl * n1pl * s_half * s_half * std::sin(p1 / 2.0) *
                   std::sin(p1 / 2.0);
    out.leak2[3] = 0.0;

    const double ch = std::cos(ph / 2.0), sh = s_half;
    out.c_mix1 = (n1[0] * n[0] + n1[1] * n[1]) * ch - (n1[0] * n[1] - n1[1] * n[0]) * n[2] * sh;
    out.s_mix1 = (n1[0] * n[1] - n1[1] * n[0]) * ch + (n1[0] * n[0] + n1[1] * n[1]) * n[2] * sh;
    out.c_mix2 = (n2[0] * n[0] + n2[1] * n[1]) * ch + (n2[0] * n[1] - n2[1] * n[0]) * n[2] * sh;
    out.s_mix2 = (n2[0] * n[1] - n2[1] * n[0]) * ch - (n2[0] * n[0] + n2[1] * n[1]) * n[2] * sh;

    const double s1 = std::sin(p1 / 2.0), c1 = std::cos(p1 / 2.0);
    const double s2 = std::sin(p2 / 2.0), c2 = std::cos(p2 / 2.0);
    out.j_xz = -(1.0 / h1 + 1.0 / h2) * p.j1 * p.jsc * s1 * sh *
               (out.c_mix1 * c1 + out.s_mix1 * n1[2] * s1);
    out.j_yz = -(1.0 / h1 + 1.0 / h2) * p.j1 * p.jsc * s1 * sh *
               (out.c_mix1 * n1[2] * s1 - out.s_mix1 * c1);
    out.j_zx = (1.0 / h3 + 1.0 / h4) * p.j2 * p.jsc * s2 * sh *
               (out.c_mix2 * c2 - out.s_mix2 * n2[2] * s2);
    out.j_zy = -(1.0 / h3 + 1.0 / h4) * p.j2 * p.jsc * s2 * sh *
               (-out.c_mix2 * n2[2] * s2 - out.s_mix2 * c2);
    return out;
}

} // namespace stq

#endif
