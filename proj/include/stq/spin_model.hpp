#ifndef STQ_SPIN_MODEL_HPP
#define STQ_SPIN_MODEL_HPP

#include <array>
#include <cmath>

#include "stq/matrix.hpp"
#include "stq/rotation.hpp"

namespace stq {

/// Parameters of the 16-dimensional four-spin model: one Zeeman vector per
/// dot (ueV), the two intra-qubit exchange couplings J1, J2, the
/// superconductor-mediated coupling jsc, and the three bond rotations.
/// Tensor ordering is fixed as dot1 (x) dot2 (x) dot3 (x) dot4, spin-up
/// first; every other module inherits this convention.
struct SpinParams {
    std::array<Vec3, 4> h{};
    double j1 = 0.0;
    double j2 = 0.0;
    double jsc = 0.0;
    Rotation3 rot1;  // bond 1-2
    Rotation3 rotsc; // bond 2-3 (angle 2*Phi_so in the uniform case)
    Rotation3 rot2;  // bond 3-4

    bool zeeman_aligned(double tol = 1e-12) const {
        for (const auto& v : h) {
            const double scale = std::max(1.0, std::abs(v[2]));
            if (std::abs(v[0]) > tol * scale || std::abs(v[1]) > tol * scale) return false;
        }
        return true;
    }

    double h_mag(int alpha) const { return norm(h[static_cast<size_t>(alpha)]); }
    double h_bar() const { return (h_mag(0) + h_mag(1) + h_mag(2) + h_mag(3)) / 4.0; }
    double dh1() const { return h_mag(0) - h_mag(1); }
    double dh() const { return h_mag(1) - h_mag(2); }
    double dh2() const { return h_mag(2) - h_mag(3); }
};

/// Uniform-device convenience constructor: a single SOI axis at polar angle
/// theta from z, spin-flip angle phi_so on both interdot bonds and 2*phi_so
/// on the superconductor bond. Zeeman magnitudes from (h_bar, dh, dh1, dh2).
inline SpinParams make_uniform_spin_params(double h_bar, double dh, double dh1, double dh2,
                                           double j1, double j2, double jsc, double phi_so,
                                           double theta) {
    SpinParams p;
    const double h2 = h_bar - (dh1 - 2.0 * dh - dh2) / 4.0;
    const double h1 = h2 + dh1;
    const double h3 = h2 - dh;
    const double h4 = h3 - dh2;
    p.h = {Vec3{0, 0, h1}, Vec3{0, 0, h2}, Vec3{0, 0, h3}, Vec3{0, 0, h4}};
    p.j1 = j1;
    p.j2 = j2;
    p.jsc = jsc;
    const Vec3 n_so{std::sin(theta), 0.0, std::cos(theta)};
    p.rot1 = Rotation3(n_so, phi_so);
    p.rot2 = Rotation3(n_so, phi_so);
    p.rotsc = Rotation3(n_so, 2.0 * phi_so);
    return p;
}

/// Single-spin operator acting on dot `site` (0..3) in the 16-dim space.
inline Matrix four_spin_op(const Matrix& m, int site) {
    Matrix out = (site == 0) ? m : Matrix::identity(2);
    for (int s = 1; s < 4; ++s) out = kron(out, (s == site) ? m : Matrix::identity(2));
    return out;
}

/// The four-spin Hamiltonian
///   H = 1/2 sum_a h_a.sigma^a + (jsc/4) sigma^2.R sigma^3
///     + (j1/4) sigma^1.R1 sigma^2 + (j2/4) sigma^3.R2 sigma^4.
inline Matrix build_h_spin(const SpinParams& p) {
    Matrix h = Matrix::zero(16);
    for (int alpha = 0; alpha < 4; ++alpha)
        for (int a = 0; a < 3; ++a) {
            const double c = p.h[static_cast<size_t>(alpha)][static_cast<size_t>(a)];
            if (c != 0.0) h += cplx(0.5 * c, 0.0) * four_spin_op(pauli(a), alpha);
        }
    struct Bond {
        double j;
        const Rotation3* rot;
        int s1, s2;
    };
    const Bond bonds[3] = {{p.jsc, &p.rotsc, 1, 2}, {p.j1, &p.rot1, 0, 1}, {p.j2, &p.rot2, 2, 3}};
    for (const auto& bond : bonds) {
        if (bond.j == 0.0) continue;
        const Mat3 r = rotation_matrix(*bond.rot);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double c = bond.j / 4.0 * r.m[a][b];
                if (c != 0.0)
                    h += cplx(c, 0.0) * (four_spin_op(pauli(a), bond.s1) * four_spin_op(pauli(b), bond.s2));
            }
    }
    return h;
}

namespace detail {

// Rotation taking z to the direction of v (deterministic choice of axis).
inline Mat3 z_to_direction(const Vec3& v) {
    const double len = norm(v);
    const Vec3 n{v[0] / len, v[1] / len, v[2] / len};
    if (n[2] > 1.0 - 1e-14) return Mat3::identity();
    if (n[2] < -1.0 + 1e-14) return rotation_matrix(Rotation3(Vec3{1, 0, 0}, pi));
    Vec3 axis{-n[1], n[0], 0.0}; // z cross n
    const double s = norm(axis);
    for (auto& x : axis) x /= s;
    return rotation_matrix(Rotation3(axis, std::acos(std::clamp(n[2], -1.0, 1.0))));
}

} // namespace detail

/// Gauge transformation for arbitrary Zeeman directions: rotate each dot's
/// local frame so its Zeeman field points along z, absorbing the frames into
/// the bond rotations (R1 -> Rz1^-1 R1 Rz2 and so on). The output model is
/// unitarily equivalent to the input, so all spectra coincide.
inline SpinParams gauge_align_zeeman(const std::array<Vec3, 4>& h_raw, const Rotation3& rot1,
                                     const Rotation3& rotsc, const Rotation3& rot2, double j1,
                                     double j2, double jsc) {
    std::array<Mat3, 4> rz;
    SpinParams out;
    for (int alpha = 0; alpha < 4; ++alpha) {
        const double mag = norm(h_raw[static_cast<size_t>(alpha)]);
        if (mag == 0.0)
            throw ZeroZeemanField("gauge_align_zeeman: Zeeman field of dot " +
                                  std::to_string(alpha + 1) + " is zero, local frame undefined");
        rz[static_cast<size_t>(alpha)] = detail::z_to_direction(h_raw[static_cast<size_t>(alpha)]);
        out.h[static_cast<size_t>(alpha)] = Vec3{0.0, 0.0, mag};
    }
    out.j1 = j1;
    out.j2 = j2;
    out.jsc = jsc;
    out.rot1 = rotation_from_matrix(rz[0].transpose() * rotation_matrix(rot1) * rz[1]);
    out.rotsc = rotation_from_matrix(rz[1].transpose() * rotation_matrix(rotsc) * rz[2]);
    out.rot2 = rotation_from_matrix(rz[2].transpose() * rotation_matrix(rot2) * rz[3]);
    return out;
}

} // namespace stq

#endif
