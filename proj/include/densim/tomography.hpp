// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "densim/channels.hpp"
#include "densim/complex_matrix.hpp"
#include "densim/deutsch.hpp"
#include "densim/gates.hpp"
#include "densim/rng.hpp"
#include "densim/state.hpp"

namespace densim {

enum class Basis { X, Y, Z };

inline const std::array<Basis, 3>& all_bases() {
    static const std::array<Basis, 3> all = {Basis::X, Basis::Y, Basis::Z};
    return all;
}

inline const char* to_string(Basis b) {
    switch (b) {
        case Basis::X: return "X";
        case Basis::Y: return "Y";
        case Basis::Z: return "Z";
    }
    return "?";
}

inline Basis parse_basis(const std::string& s) {
    if (s == "X") return Basis::X;
    if (s == "Y") return Basis::Y;
    if (s == "Z") return Basis::Z;
    throw std::invalid_argument("unknown basis '" + s + "'");
}

/// Measurement counts for one (oracle, basis) cell.
struct CountsRecord {
    std::optional<OracleKind> oracle;
    Basis basis = Basis::Z;
    std::uint64_t shots = 0;
    std::uint64_t n0 = 0;
    std::uint64_t n1 = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> device;
};

/// Pre-measurement rotation mapping the named Pauli basis onto Z:
/// Z -> I, X -> H, Y -> H S-dagger (S-dagger first, then H).
inline ComplexMatrix basis_rotation(Basis b) {
    switch (b) {
        case Basis::Z: return ComplexMatrix::identity(2);
        case Basis::X: return standard_gate(Gate::H);
        case Basis::Y: return standard_gate(Gate::H) * standard_gate(Gate::SDagger);
    }
    throw std::invalid_argument("basis_rotation: unknown basis");
}

/// P(outcome 0) after rotating into the measurement basis.
inline double outcome_zero_prob(const DensityMatrix& rho, Basis b) {
    if (rho.dim() != 2) throw std::invalid_argument("outcome_zero_prob: single-qubit only");
    const DensityMatrix rotated = apply_unitary(rho, basis_rotation(b));
    return measure_probs(rotated, computational_projectors(2))[0];
}

/// Draw `shots` independent Bernoulli outcomes; deterministic per seed.
inline CountsRecord sample_counts(const DensityMatrix& rho, Basis b, std::uint64_t shots,
                                  std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("sample_counts: shots must be positive");
    const double p0 = outcome_zero_prob(rho, b);
    Rng rng(seed);
    std::uint64_t n0 = 0;
    for (std::uint64_t s = 0; s < shots; ++s) n0 += rng.uniform() < p0 ? 1 : 0;
    CountsRecord rec;
    rec.basis = b;
    rec.shots = shots;
    rec.n0 = n0;
    rec.n1 = shots - n0;
    rec.seed = seed;
    return rec;
}

/// (n0 - n1) / shots, the empirical Pauli expectation.
inline double expectation_from_counts(const CountsRecord& c) {
    if (c.n0 + c.n1 != c.shots) throw std::invalid_argument("CountsRecord: counts do not sum to shots");
    if (c.shots == 0) throw std::invalid_argument("CountsRecord: zero shots");
    return (static_cast<double>(c.n0) - static_cast<double>(c.n1)) / static_cast<double>(c.shots);
}

struct PauliExpectations {
    double ex = 0.0;
    double ey = 0.0;
    double ez = 0.0;
};

/// Exact Tr(rho sigma) for each Pauli axis.
inline PauliExpectations pauli_expectations(const DensityMatrix& rho) {
    if (rho.dim() != 2) throw std::invalid_argument("pauli_expectations: single-qubit only");
    return {(pauli_matrix(Pauli::X) * rho.matrix()).trace().real(),
            (pauli_matrix(Pauli::Y) * rho.matrix()).trace().real(),
            (pauli_matrix(Pauli::Z) * rho.matrix()).trace().real()};
}

/// Linear-inversion reconstruction (raw; may be non-PSD under shot noise).
inline ComplexMatrix reconstruct(const PauliExpectations& e) {
    for (double v : {e.ex, e.ey, e.ez})
        if (!(v >= -1.0 && v <= 1.0))
            throw std::invalid_argument("reconstruct: expectation outside [-1,1]");
    ComplexMatrix m(2);
    m(0, 0) = 0.5 * (1.0 + e.ez);
    m(1, 1) = 0.5 * (1.0 - e.ez);
    m(0, 1) = 0.5 * cplx{e.ex, -e.ey};
    m(1, 0) = 0.5 * cplx{e.ex, e.ey};
    return m;
}

/// Clip negative eigenvalues and renormalize; identity on valid inputs.
inline DensityMatrix project_to_density(const ComplexMatrix& raw) {
    if (!raw.is_hermitian(1e-8)) throw std::invalid_argument("project_to_density: not Hermitian");
    if (std::abs(raw.trace() - cplx{1.0}) > 1e-8)
        throw std::invalid_argument("project_to_density: trace deviates from 1");
    const EigResult e = herm_eig(raw);
    double clipped_mass = 0.0, total = 0.0;
    for (double lam : e.eigenvalues) {
        if (lam < 0.0) clipped_mass -= lam;
        total += std::max(lam, 0.0);
    }
    if (clipped_mass > 0.5)
        throw std::invalid_argument("project_to_density: clipping deficit exceeds 0.5");
    return DensityMatrix(eig_rebuild(e, [&](double lam) { return std::max(lam, 0.0) / total; }));
}

/// Convenience: counts in all three bases to a projected state estimate.
inline DensityMatrix estimate_state(const CountsRecord& cx, const CountsRecord& cy,
                                    const CountsRecord& cz) {
    if (cx.basis != Basis::X || cy.basis != Basis::Y || cz.basis != Basis::Z)
        throw std::invalid_argument("estimate_state: records must be in X, Y, Z order");
    return project_to_density(reconstruct({expectation_from_counts(cx),
                                           expectation_from_counts(cy),
                                           expectation_from_counts(cz)}));
}

}  // namespace densim
