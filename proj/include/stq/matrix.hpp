#ifndef STQ_MATRIX_HPP
#define STQ_MATRIX_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "stq/errors.hpp"

namespace stq {

using cplx = std::complex<double>;

/// Dense square complex matrix. Carrier for every Hamiltonian, unitary
/// and projector in the library. Row-major storage, value semantics.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) { assert(dim > 0); }

    static Matrix identity(int dim) {
        Matrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix zero(int dim) { return Matrix(dim); }

    int dim() const { return dim_; }

    cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

    std::span<const cplx> data() const { return a_; }

    Matrix dagger() const {
        Matrix out(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    Matrix& operator+=(const Matrix& o) {
        assert(dim_ == o.dim_);
        for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        assert(dim_ == o.dim_);
        for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Matrix& operator*=(cplx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        assert(a.dim_ == b.dim_);
        const int n = a.dim_;
        Matrix out(n);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                const cplx aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
            }
        }
        return out;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    /// Entrywise max modulus.
    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    bool is_hermitian(double tol = 1e-12) const {
        const double scale = std::max(1.0, max_abs());
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol * scale) return false;
        return true;
    }

    bool is_unitary(double tol = 1e-10) const {
        Matrix p = dagger() * (*this);
        p -= identity(dim_);
        return p.max_abs() <= tol;
    }

    /// Subtract tr(M)/dim on the diagonal. Used wherever the model is
    /// defined only up to a constant energy offset.
    Matrix traceless() const {
        Matrix out = *this;
        const cplx shift = trace() / static_cast<double>(dim_);
        for (int i = 0; i < dim_; ++i) out(i, i) -= shift;
        return out;
    }

    /// Restriction to the rows/columns listed in `idx`, in that order.
    Matrix restrict_to(std::span<const int> idx) const {
        Matrix out(static_cast<int>(idx.size()));
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j)
                out(static_cast<int>(i), static_cast<int>(j)) = (*this)(idx[i], idx[j]);
        return out;
    }

  private:
    int dim_ = 0;
    std::vector<cplx> a_;
};

/// Tensor product: entry ((i*dim_b+k),(j*dim_b+l)) = a(i,j)*b(k,l).
inline Matrix kron(const Matrix& a, const Matrix& b) {
    const int na = a.dim(), nb = b.dim();
    Matrix out(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cplx aij = a(i, j);
            if (aij == 0.0) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return out;
}

inline void require_hermitian(const Matrix& m, const char* who) {
    if (!m.is_hermitian())
        throw NonHermitianInput(std::string(who) + ": input matrix is not Hermitian within tolerance");
}

// Pauli matrices and the 2x2 identity.
inline Matrix pauli_x() {
    Matrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}
inline Matrix pauli_y() {
    Matrix m(2);
    m(0, 1) = cplx(0, -1);
    m(1, 0) = cplx(0, 1);
    return m;
}
inline Matrix pauli_z() {
    Matrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}
inline const Matrix& pauli(int axis) {
    static const Matrix p[3] = {pauli_x(), pauli_y(), pauli_z()};
    return p[axis];
}

} // namespace stq

#endif
