// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "densim/complex_matrix.hpp"
#include "densim/eig.hpp"
#include "densim/state.hpp"

namespace densim {

/// Uhlmann fidelity F = Tr sqrt(sqrt(rho) sigma sqrt(rho)), the
/// non-squared convention: F = 1 iff the states coincide.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    const ComplexMatrix s = mat_sqrt_psd(rho.matrix());
    const ComplexMatrix inner = s * sigma.matrix() * s;
    // Symmetrize away roundoff before the eigensolver's Hermiticity check.
    ComplexMatrix h(inner.dim());
    for (std::size_t i = 0; i < inner.dim(); ++i)
        for (std::size_t j = 0; j < inner.dim(); ++j)
            h(i, j) = 0.5 * (inner(i, j) + std::conj(inner(j, i)));
    double f = 0.0;
    for (double lam : herm_eig(h).eigenvalues) f += std::sqrt(std::max(lam, 0.0));
    return std::clamp(f, 0.0, 1.0);
}

/// Single-qubit closed form F^2 = Tr(rho sigma) + 2 sqrt(det rho det sigma);
/// kept as an independent route for cross-validation.
inline double fidelity_qubit_closed_form(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != 2 || sigma.dim() != 2)
        throw std::invalid_argument("fidelity_qubit_closed_form: single-qubit only");
    auto det = [](const ComplexMatrix& m) {
        return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    };
    const double tr = (rho.matrix() * sigma.matrix()).trace().real();
    const double d = std::max(det(rho.matrix()), 0.0) * std::max(det(sigma.matrix()), 0.0);
    return std::clamp(std::sqrt(std::max(tr + 2.0 * std::sqrt(d), 0.0)), 0.0, 1.0);
}

/// Weight of the information-free isotropic component and the alignment
/// of the remainder with a reference state.
struct IsotropicIndex {
    double weight = 0.0;
    double alignment = 0.0;
};

inline constexpr double isotropic_degenerate_threshold = 1e-9;

/// Split rho = w I/2^n + (1-w) rho_hat with w = 2^n lambda_min. For the
/// maximally mixed state (w = 1) rho_hat is undefined; the identity
/// component is returned and the alignment is defined as 0 downstream.
inline std::pair<double, DensityMatrix> isotropic_decompose(const DensityMatrix& rho) {
    const std::size_t d = rho.dim();
    const EigResult e = herm_eig(rho.matrix());
    const double lambda_min = std::max(e.eigenvalues.front(), 0.0);
    const double weight = std::min(static_cast<double>(d) * lambda_min, 1.0);
    if (weight > 1.0 - isotropic_degenerate_threshold)
        return {1.0, DensityMatrix::maximally_mixed(d)};
    ComplexMatrix hat(d);
    const double scale = 1.0 / (1.0 - weight);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            hat(i, j) = scale * (rho(i, j) - (i == j ? cplx{lambda_min} : cplx{}));
    // Clip the residual negative eigenvalue noise introduced by roundoff.
    const EigResult eh = herm_eig(hat);
    double total = 0.0;
    for (double lam : eh.eigenvalues) total += std::max(lam, 0.0);
    return {weight, DensityMatrix(eig_rebuild(eh, [&](double lam) {
                        return std::max(lam, 0.0) / total;
                    }))};
}

/// A = Fid(rho_hat, rho_ref) - Fid(rho_hat, rho_orth) where rho_orth is
/// the isotropic mixture of everything orthogonal to the reference.
inline double alignment(const DensityMatrix& rho, const PureState& reference) {
    if (rho.dim() != reference.dim()) throw std::invalid_argument("alignment: dimension mismatch");
    const auto [weight, rho_hat] = isotropic_decompose(rho);
    if (weight > 1.0 - isotropic_degenerate_threshold) return 0.0;
    const std::size_t d = rho.dim();
    const ComplexMatrix ref_proj = reference.projector();
    ComplexMatrix orth(d);
    const double scale = 1.0 / static_cast<double>(d - 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            orth(i, j) = scale * ((i == j ? cplx{1.0} : cplx{}) - ref_proj(i, j));
    const DensityMatrix rho_ref = DensityMatrix(ref_proj);
    const DensityMatrix rho_orth = DensityMatrix(std::move(orth));
    return fidelity(rho_hat, rho_ref) - fidelity(rho_hat, rho_orth);
}

inline IsotropicIndex isotropic_index(const DensityMatrix& rho, const PureState& reference) {
    return {isotropic_decompose(rho).first, alignment(rho, reference)};
}

}  // namespace densim
