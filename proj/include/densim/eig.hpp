// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "densim/complex_matrix.hpp"

namespace densim {

inline constexpr double hermitian_tol = 1e-10;
inline constexpr double psd_eig_tol = 1e-10;
inline constexpr double jacobi_off_target = 1e-14;
inline constexpr double polar_min_singular = 1e-8;

struct EigResult {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns, same order
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Each sweep phases the pivot entry real and applies the classic
/// symmetric rotation; converges quadratically at these dimensions.
inline EigResult herm_eig(const ComplexMatrix& h) {
    if (!h.is_hermitian(hermitian_tol))
        throw std::invalid_argument("herm_eig: matrix is not Hermitian");
    const std::size_t n = h.dim();

    // Symmetrize away the input's sub-tolerance asymmetry.
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps && off_norm() > jacobi_off_target; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;

                // Phase w takes the (p,q) entry to |apq|; then a real
                // rotation with tangent t annihilates it.
                const cplx w = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Columns: A <- A J with J(p,p)=c, J(q,p)=-s*conj(w),
                // J(p,q)=s, J(q,q)=c*conj(w).
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(w) * akq;
                    a(k, q) = s * akp + c * std::conj(w) * akq;
                }
                // Rows: A <- J^dagger A.
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * w * aqk;
                    a(q, k) = s * apk + c * w * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * std::conj(w) * vkq;
                    v(k, q) = s * vkp + c * std::conj(w) * vkq;
                }
            }
        }
    }
    if (off_norm() > 1e-12)
        throw std::runtime_error("herm_eig: Jacobi sweep failed to converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigResult r{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t j = 0; j < n; ++j) {
        r.eigenvalues[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) r.eigenvectors(i, j) = v(i, order[j]);
    }
    return r;
}

/// Closed-form eigenvalues of a 2x2 Hermitian matrix, ascending. Used to
/// cross-validate the Jacobi path.
inline std::array<double, 2> herm_eigvals_2x2(const ComplexMatrix& h) {
    if (h.dim() != 2) throw std::invalid_argument("herm_eigvals_2x2: dimension must be 2");
    if (!h.is_hermitian(hermitian_tol))
        throw std::invalid_argument("herm_eigvals_2x2: matrix is not Hermitian");
    const double mean = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double delta = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double radius = std::sqrt(delta * delta + std::norm(h(0, 1)));
    return {mean - radius, mean + radius};
}

/// Rebuild V f(diag) V^dagger from an eigendecomposition.
template <typename F>
inline ComplexMatrix eig_rebuild(const EigResult& e, F&& f) {
    const std::size_t n = e.eigenvectors.dim();
    ComplexMatrix r(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fk = f(e.eigenvalues[k]);
        if (fk == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += fk * e.eigenvectors(i, k) * std::conj(e.eigenvectors(j, k));
    }
    return r;
}

/// Hermitian PSD square root. Eigenvalues below -1e-10 are rejected;
/// small negatives inside tolerance are clipped to zero.
inline ComplexMatrix mat_sqrt_psd(const ComplexMatrix& a) {
    EigResult e = herm_eig(a);
    for (double lam : e.eigenvalues)
        if (lam < -psd_eig_tol) throw std::invalid_argument("mat_sqrt_psd: matrix is not PSD");
    return eig_rebuild(e, [](double lam) { return std::sqrt(std::max(lam, 0.0)); });
}

/// Unitary factor U of the polar decomposition a = U P, computed as
/// a (a^dagger a)^{-1/2}. U is the Frobenius-nearest unitary to a.
inline ComplexMatrix polar_unitary(const ComplexMatrix& a) {
    EigResult e = herm_eig(a.adjoint() * a);
    const double smin = std::sqrt(std::max(e.eigenvalues.front(), 0.0));
    if (smin <= polar_min_singular)
        throw std::invalid_argument("polar_unitary: matrix is near-singular");
    const ComplexMatrix inv_sqrt =
        eig_rebuild(e, [](double lam) { return 1.0 / std::sqrt(lam); });
    return a * inv_sqrt;
}

}  // namespace densim
