#ifndef STQ_ROTATION_HPP
#define STQ_ROTATION_HPP

#include <array>
#include <cmath>

#include "stq/constants.hpp"
#include "stq/errors.hpp"
#include "stq/matrix.hpp"

namespace stq {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// 3x3 real matrix, just enough for composing spin rotations.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static Mat3 identity() {
        Mat3 r;
        for (int i = 0; i < 3; ++i) r.m[i][i] = 1.0;
        return r;
    }
    Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }
    friend Mat3 operator*(const Mat3& a, const Mat3& b) {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }
    Vec3 operator*(const Vec3& v) const {
        Vec3 r{};
        for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
        return r;
    }
};

/// Axis-angle rotation. Axis must be unit length; the angle is stored as
/// given (canonicalize only for reporting).
struct Rotation3 {
    Vec3 axis{0.0, 0.0, 1.0};
    double angle = 0.0;

    Rotation3() = default;
    Rotation3(const Vec3& n, double phi) : axis(n), angle(phi) { validate(); }

    void validate() const {
        if (std::abs(norm(axis) - 1.0) > 1e-12)
            throw NonUnitAxis("Rotation3: axis must be a unit vector");
        if (!std::isfinite(angle)) throw NonUnitAxis("Rotation3: angle must be finite");
    }

    /// Angle between the rotation axis and the Zeeman direction z.
    double theta() const { return std::acos(std::clamp(axis[2], -1.0, 1.0)); }
};

/// SU(2) spin-flip unitary U = exp(i phi n.sigma / 2).
inline Matrix spin_flip_unitary(const Rotation3& r) {
    r.validate();
    const double c = std::cos(r.angle / 2.0);
    const double s = std::sin(r.angle / 2.0);
    Matrix u = Matrix::identity(2) * cplx(c, 0.0);
    for (int a = 0; a < 3; ++a) u += cplx(0.0, s * r.axis[a]) * pauli(a);
    return u;
}

/// Right-handed SO(3) rotation matrix (Rodrigues form). Satisfies
/// U^dag sigma_a U = sum_b (R^-1)_ab sigma_b with U = spin_flip_unitary.
inline Mat3 rotation_matrix(const Rotation3& r) {
    r.validate();
    const double c = std::cos(r.angle);
    const double s = std::sin(r.angle);
    const Vec3& n = r.axis;
    Mat3 out;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out.m[a][b] = c * (a == b ? 1.0 : 0.0) + (1.0 - c) * n[a] * n[b];
    out.m[0][1] -= s * n[2];
    out.m[1][0] += s * n[2];
    out.m[0][2] += s * n[1];
    out.m[2][0] -= s * n[1];
    out.m[1][2] -= s * n[0];
    out.m[2][1] += s * n[0];
    return out;
}

/// Axis-angle extraction from an SO(3) matrix. Canonical output:
/// angle in [0, pi], axis chosen deterministically at angle = pi.
inline Rotation3 rotation_from_matrix(const Mat3& r) {
    const double tr = r.m[0][0] + r.m[1][1] + r.m[2][2];
    const double c = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
    const double angle = std::acos(c);
    Vec3 ax{r.m[2][1] - r.m[1][2], r.m[0][2] - r.m[2][0], r.m[1][0] - r.m[0][1]};
    const double s = norm(ax);
    if (s > 1e-9) {
        for (auto& x : ax) x /= s;
        return Rotation3(ax, angle);
    }
    if (c > 0.0) return Rotation3(Vec3{0.0, 0.0, 1.0}, 0.0); // identity
    // angle pi: axis from the symmetric part, largest diagonal entry first
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (r.m[i][i] > r.m[k][k]) k = i;
    Vec3 n{};
    n[k] = std::sqrt(std::max(0.0, (r.m[k][k] + 1.0) / 2.0));
    for (int i = 0; i < 3; ++i)
        if (i != k) n[i] = r.m[k][i] / (2.0 * n[k]);
    const double nn = norm(n);
    for (auto& x : n) x /= nn;
    return Rotation3(n, pi);
}

} // namespace stq

#endif
