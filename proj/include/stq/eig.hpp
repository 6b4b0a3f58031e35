#ifndef STQ_EIG_HPP
#define STQ_EIG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "stq/constants.hpp"
#include "stq/matrix.hpp"

namespace stq {

/// Eigendecomposition of a Hermitian matrix. `values` ascending,
/// columns of `vectors` are the matching orthonormal eigenvectors.
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;

    Matrix reconstruct() const {
        const int n = vectors.dim();
        Matrix d(n);
        for (int i = 0; i < n; ++i) d(i, i) = values[static_cast<size_t>(i)];
        return vectors * d * vectors.dagger();
    }
};

namespace detail {

// Cyclic Jacobi sweeps on a real symmetric matrix, accumulating the
// orthogonal transform in v. Converges when the off-diagonal Frobenius
// norm drops below tol_rel * ||m||_F; at most max_sweeps sweeps.
inline void jacobi_real_symmetric(std::vector<double>& m, std::vector<double>& v, int n,
                                  double tol_rel = 1e-14, int max_sweeps = 100) {
    auto at = [n](std::vector<double>& a, int i, int j) -> double& {
        return a[static_cast<size_t>(i) * n + j];
    };
    double frob = 0.0;
    for (const double x : m) frob += x * x;
    frob = std::sqrt(frob);
    const double thresh = tol_rel * std::max(frob, 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += 2.0 * at(m, p, q) * at(m, p, q);
        if (std::sqrt(off) < thresh) return;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(m, p, q);
                if (apq == 0.0) continue;
                const double app = at(m, p, p);
                const double aqq = at(m, q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                // smaller-magnitude root for a stable rotation angle
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double mkp = at(m, k, p);
                    const double mkq = at(m, k, q);
                    at(m, k, p) = c * mkp - s * mkq;
                    at(m, k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = at(m, p, k);
                    const double mqk = at(m, q, k);
                    at(m, p, k) = c * mpk - s * mqk;
                    at(m, q, k) = s * mpk + c * mqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = at(v, k, p);
                    const double vkq = at(v, k, q);
                    at(v, k, p) = c * vkp - s * vkq;
                    at(v, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
}

} // namespace detail

/// Hermitian eigendecomposition via cyclic Jacobi on the 2N x 2N real
/// symmetric embedding [[A, -B], [B, A]] of H = A + iB. Deterministic:
/// fixed sweep order, eigenvalues ascending, each eigenvector phase-fixed
/// so its first component above threshold is real positive.
inline EigenDecomposition eigh(const Matrix& h) {
    require_hermitian(h, "eigh");
    const int n = h.dim();
    const int n2 = 2 * n;

    std::vector<double> m(static_cast<size_t>(n2) * n2, 0.0);
    std::vector<double> v(static_cast<size_t>(n2) * n2, 0.0);
    for (int i = 0; i < n2; ++i) v[static_cast<size_t>(i) * n2 + i] = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = h(i, j).real();
            const double b = h(i, j).imag();
            m[static_cast<size_t>(i) * n2 + j] = a;
            m[static_cast<size_t>(i + n) * n2 + j + n] = a;
            m[static_cast<size_t>(i) * n2 + j + n] = -b;
            m[static_cast<size_t>(i + n) * n2 + j] = b;
        }
    }
    detail::jacobi_real_symmetric(m, v, n2);

    std::vector<double> diag(n2);
    for (int i = 0; i < n2; ++i) diag[static_cast<size_t>(i)] = m[static_cast<size_t>(i) * n2 + i];
    std::vector<int> order(n2);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return diag[static_cast<size_t>(a)] < diag[static_cast<size_t>(b)]; });

    // Each complex eigenvector appears twice in the embedding (as w and iw).
    // Walk candidates in ascending eigenvalue order, complexify, and keep one
    // representative per complex direction by Gram-Schmidt elimination.
    EigenDecomposition out;
    out.vectors = Matrix(n);
    std::vector<std::vector<cplx>> kept;
    kept.reserve(static_cast<size_t>(n));
    for (int col : order) {
        if (static_cast<int>(kept.size()) == n) break;
        std::vector<cplx> w(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            w[static_cast<size_t>(i)] =
                cplx(v[static_cast<size_t>(i) * n2 + col], v[static_cast<size_t>(i + n) * n2 + col]);
        for (const auto& u : kept) {
            cplx ov = 0.0;
            for (int i = 0; i < n; ++i) ov += std::conj(u[static_cast<size_t>(i)]) * w[static_cast<size_t>(i)];
            for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] -= ov * u[static_cast<size_t>(i)];
        }
        double norm = 0.0;
        for (const auto& x : w) norm += std::norm(x);
        norm = std::sqrt(norm);
        if (norm < 1e-6) continue; // duplicate of an already-kept direction
        for (auto& x : w) x /= norm;
        // phase convention: first significant component real positive
        for (const auto& x : w) {
            if (std::abs(x) > 1e-8) {
                const cplx phase = std::conj(x) / std::abs(x);
                for (auto& y : w) y *= phase;
                break;
            }
        }
        out.values.push_back(diag[static_cast<size_t>(col)]);
        kept.push_back(std::move(w));
    }
    if (static_cast<int>(kept.size()) != n)
        throw std::runtime_error("eigh: failed to extract a full complex eigenbasis from the real embedding");
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) out.vectors(i, j) = kept[static_cast<size_t>(j)][static_cast<size_t>(i)];
    return out;
}

/// Propagator exp(-i H t / hbar) for a Hermitian H (t in ns, H in ueV),
/// computed through the eigendecomposition.
inline Matrix evolve(const Matrix& h, double t_ns) {
    const EigenDecomposition ed = eigh(h);
    const int n = h.dim();
    Matrix d(n);
    for (int i = 0; i < n; ++i) {
        const double phase = -ed.values[static_cast<size_t>(i)] * t_ns / hbar_ueV_ns;
        d(i, i) = cplx(std::cos(phase), std::sin(phase));
    }
    return ed.vectors * d * ed.vectors.dagger();
}

} // namespace stq

#endif
