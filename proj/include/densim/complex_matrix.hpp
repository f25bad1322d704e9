// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace densim {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major. Register dimensions in this
/// toolkit are 2, 4 and 8 (one to three qubits).
class ComplexMatrix {
public:
    static constexpr std::size_t max_dim = 8;

    explicit ComplexMatrix(std::size_t dim) : dim_(check_dim(dim)), a_(dim * dim) {}

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
        ComplexMatrix m(rows.size());
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != m.dim_)
                throw std::invalid_argument("ComplexMatrix: ragged row in initializer");
            std::size_t j = 0;
            for (const cplx& v : row) m(i, j++) = v;
            ++i;
        }
        m.check_finite();
        return m;
    }

    std::size_t dim() const { return dim_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

    ComplexMatrix operator+(const ComplexMatrix& o) const {
        check_same_dim(o);
        ComplexMatrix r(dim_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
        return r;
    }

    ComplexMatrix operator-(const ComplexMatrix& o) const {
        check_same_dim(o);
        ComplexMatrix r(dim_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
        return r;
    }

    ComplexMatrix operator*(const ComplexMatrix& o) const {
        check_same_dim(o);
        ComplexMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t k = 0; k < dim_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < dim_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    friend ComplexMatrix operator*(const cplx& s, const ComplexMatrix& m) {
        ComplexMatrix r(m.dim_);
        for (std::size_t k = 0; k < m.a_.size(); ++k) r.a_[k] = s * m.a_[k];
        return r;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix r(dim_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = std::conj(a_[k]);
        return r;
    }

    cplx trace() const {
        cplx t{};
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    /// Largest entry magnitude of (this - o).
    double max_abs_diff(const ComplexMatrix& o) const {
        check_same_dim(o);
        double m = 0.0;
        for (std::size_t k = 0; k < a_.size(); ++k) m = std::max(m, std::abs(a_[k] - o.a_[k]));
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    bool is_hermitian(double tol) const { return max_abs_diff(adjoint()) <= tol; }

    bool is_unitary(double tol) const {
        return (adjoint() * *this).max_abs_diff(identity(dim_)) <= tol;
    }

    void check_finite() const {
        for (const cplx& v : a_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("ComplexMatrix: non-finite entry");
    }

private:
    static std::size_t check_dim(std::size_t dim) {
        if (dim != 2 && dim != 4 && dim != 8)
            throw std::invalid_argument("ComplexMatrix: dimension must be 2, 4 or 8");
        return dim;
    }

    void check_same_dim(const ComplexMatrix& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    }

    std::size_t dim_;
    std::vector<cplx> a_;
};

/// Kronecker product. Register size is capped at three qubits, so the
/// result dimension may not exceed 8.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t da = a.dim(), db = b.dim();
    if (da * db > ComplexMatrix::max_dim)
        throw std::invalid_argument("kron: result dimension exceeds 8");
    ComplexMatrix r(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l)
                    r(i * db + k, j * db + l) = aij * b(k, l);
        }
    return r;
}

/// Kronecker product of amplitude vectors (first factor = leftmost qubit).
inline std::vector<cplx> kron(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() * b.size() > ComplexMatrix::max_dim)
        throw std::invalid_argument("kron: result dimension exceeds 8");
    std::vector<cplx> r(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
    return r;
}

inline std::size_t qubit_count(std::size_t dim) {
    switch (dim) {
        case 2: return 1;
        case 4: return 2;
        case 8: return 3;
        default: throw std::invalid_argument("qubit_count: dimension must be 2, 4 or 8");
    }
}

}  // namespace densim
