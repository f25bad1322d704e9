// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include "densim/complex_matrix.hpp"
#include "densim/eig.hpp"

namespace densim {

inline constexpr double state_norm_tol = 1e-10;
inline constexpr double density_trace_tol = 1e-10;
inline constexpr double prob_clip_tol = 1e-12;
inline constexpr double prob_deficit_tol = 1e-9;

/// Normalized amplitude vector over one to three qubits.
class PureState {
public:
    explicit PureState(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
        qubit_count(amps_.size());  // validates dimension
        double norm2 = 0.0;
        for (const cplx& a : amps_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw std::invalid_argument("PureState: non-finite amplitude");
            norm2 += std::norm(a);
        }
        if (std::abs(norm2 - 1.0) > state_norm_tol)
            throw std::invalid_argument("PureState: amplitudes are not normalized");
    }

    static PureState basis(std::size_t n_qubits, std::size_t index) {
        std::vector<cplx> a(std::size_t{1} << n_qubits);
        if (index >= a.size()) throw std::invalid_argument("PureState::basis: index out of range");
        a[index] = 1.0;
        return PureState(std::move(a));
    }

    std::size_t dim() const { return amps_.size(); }
    std::size_t n_qubits() const { return qubit_count(amps_.size()); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    /// |psi><psi| as a plain matrix.
    ComplexMatrix projector() const {
        ComplexMatrix m(dim());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j) m(i, j) = amps_[i] * std::conj(amps_[j]);
        return m;
    }

private:
    std::vector<cplx> amps_;
};

inline PureState kron(const PureState& a, const PureState& b) {
    return PureState(kron(a.amplitudes(), b.amplitudes()));
}

/// Hermitian, unit-trace, PSD matrix: the general (possibly mixed) state.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
        m_.check_finite();
        if (!m_.is_hermitian(hermitian_tol))
            throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
        if (std::abs(m_.trace() - cplx{1.0}) > density_trace_tol)
            throw std::invalid_argument("DensityMatrix: trace is not 1");
        const EigResult e = herm_eig(m_);
        if (e.eigenvalues.front() < -psd_eig_tol)
            throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
    }

    static DensityMatrix pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

    static DensityMatrix maximally_mixed(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0 / static_cast<double>(dim);
        return DensityMatrix(std::move(m));
    }

    std::size_t dim() const { return m_.dim(); }
    std::size_t n_qubits() const { return qubit_count(m_.dim()); }
    const ComplexMatrix& matrix() const { return m_; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

private:
    ComplexMatrix m_;
};

/// rho' = U rho U^dagger.
inline DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u) {
    if (u.dim() != rho.dim()) throw std::invalid_argument("apply_unitary: dimension mismatch");
    if (!u.is_unitary(1e-10)) throw std::invalid_argument("apply_unitary: matrix is not unitary");
    return DensityMatrix(u * rho.matrix() * u.adjoint());
}

/// Reduced state over `keep` (original qubit order preserved). Qubit 0 is
/// the leftmost tensor factor, i.e. the most significant bit of an index.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<std::size_t>& keep) {
    const std::size_t n = rho.n_qubits();
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    for (std::size_t q : keep)
        if (q >= n) throw std::invalid_argument("partial_trace: qubit index out of range");

    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::vector<std::size_t> traced;
    for (std::size_t q = 0; q < n; ++q)
        if (!keep.count(q)) traced.push_back(q);

    const std::size_t dk = std::size_t{1} << kept.size();
    const std::size_t dt = std::size_t{1} << traced.size();

    // Compose a full-register index from kept and traced sub-indices.
    auto full_index = [&](std::size_t k_bits, std::size_t t_bits) {
        std::size_t idx = 0;
        for (std::size_t a = 0; a < kept.size(); ++a) {
            const std::size_t bit = (k_bits >> (kept.size() - 1 - a)) & 1u;
            idx |= bit << (n - 1 - kept[a]);
        }
        for (std::size_t a = 0; a < traced.size(); ++a) {
            const std::size_t bit = (t_bits >> (traced.size() - 1 - a)) & 1u;
            idx |= bit << (n - 1 - traced[a]);
        }
        return idx;
    };

    ComplexMatrix out(dk);
    for (std::size_t r = 0; r < dk; ++r)
        for (std::size_t c = 0; c < dk; ++c) {
            cplx s{};
            for (std::size_t e = 0; e < dt; ++e) s += rho(full_index(r, e), full_index(c, e));
            out(r, c) = s;
        }
    return DensityMatrix(std::move(out));
}

inline void check_projectors(const std::vector<ComplexMatrix>& projectors, std::size_t dim) {
    if (projectors.empty()) throw std::invalid_argument("projectors: empty set");
    ComplexMatrix sum(dim);
    for (const ComplexMatrix& p : projectors) {
        if (p.dim() != dim) throw std::invalid_argument("projectors: dimension mismatch");
        if (!p.is_hermitian(1e-10)) throw std::invalid_argument("projectors: not Hermitian");
        if ((p * p).max_abs_diff(p) > 1e-10) throw std::invalid_argument("projectors: not idempotent");
        sum = sum + p;
    }
    if (sum.max_abs_diff(ComplexMatrix::identity(dim)) > 1e-10)
        throw std::invalid_argument("projectors: incomplete set (do not sum to identity)");
}

/// Outcome probabilities P(i) = Tr(P_i rho), clipped at zero and
/// renormalized when the clipping deficit is within tolerance.
inline std::vector<double> measure_probs(const DensityMatrix& rho,
                                         const std::vector<ComplexMatrix>& projectors) {
    check_projectors(projectors, rho.dim());
    std::vector<double> probs;
    probs.reserve(projectors.size());
    double total = 0.0;
    for (const ComplexMatrix& p : projectors) {
        double pr = (p * rho.matrix()).trace().real();
        if (pr < 0.0) {
            if (pr < -prob_deficit_tol)
                throw std::invalid_argument("measure_probs: probability below tolerance");
            pr = 0.0;
        }
        probs.push_back(pr);
        total += pr;
    }
    if (std::abs(total - 1.0) > prob_deficit_tol)
        throw std::invalid_argument("measure_probs: probabilities do not sum to 1");
    for (double& pr : probs) pr /= total;
    return probs;
}

/// Non-selective post-measurement state, sum_i P_i rho P_i.
inline DensityMatrix post_measure_state(const DensityMatrix& rho,
                                        const std::vector<ComplexMatrix>& projectors) {
    check_projectors(projectors, rho.dim());
    ComplexMatrix out(rho.dim());
    for (const ComplexMatrix& p : projectors) out = out + p * rho.matrix() * p.adjoint();
    return DensityMatrix(std::move(out));
}

/// |i><i| projectors of the computational basis.
inline std::vector<ComplexMatrix> computational_projectors(std::size_t dim) {
    std::vector<ComplexMatrix> ps;
    ps.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        ComplexMatrix p(dim);
        p(i, i) = 1.0;
        ps.push_back(std::move(p));
    }
    return ps;
}

}  // namespace densim
