// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "densim/tomography.hpp"
#include "testutil.hpp"

using namespace densim;
using densim::test::Gen;
using Catch::Approx;

namespace {
const ComplexMatrix table1_f0 = densim::test::reference().at(OracleKind::F0).state.matrix();
}

TEST_CASE("basis rotations map the named Pauli onto Z") {
    REQUIRE(basis_rotation(Basis::Z).max_abs_diff(ComplexMatrix::identity(2)) == 0.0);

    // |+> rotated for an X measurement gives outcome 0 with certainty.
    const DensityMatrix plus = DensityMatrix::pure(PureState({inv_sqrt2, inv_sqrt2}));
    REQUIRE(outcome_zero_prob(plus, Basis::X) == Approx(1.0).margin(1e-12));

    // The +Y eigenstate (|0> + i|1>)/sqrt2 likewise for a Y measurement.
    const DensityMatrix plus_y = DensityMatrix::pure(PureState({inv_sqrt2, {0.0, inv_sqrt2}}));
    REQUIRE(outcome_zero_prob(plus_y, Basis::Y) == Approx(1.0).margin(1e-12));
}

TEST_CASE("rotated measurement statistics equal the Pauli expectation") {
    Gen g(60);
    for (int rep = 0; rep < 100; ++rep) {
        const DensityMatrix rho = g.density(2);
        const PauliExpectations e = pauli_expectations(rho);
        const double px = outcome_zero_prob(rho, Basis::X);
        const double py = outcome_zero_prob(rho, Basis::Y);
        const double pz = outcome_zero_prob(rho, Basis::Z);
        REQUIRE(2.0 * px - 1.0 == Approx(e.ex).margin(1e-12));
        REQUIRE(2.0 * py - 1.0 == Approx(e.ey).margin(1e-12));
        REQUIRE(2.0 * pz - 1.0 == Approx(e.ez).margin(1e-12));
    }
}

TEST_CASE("sample_counts is exact on eigenstates and deterministic") {
    const DensityMatrix zero = DensityMatrix::pure(PureState::basis(1, 0));
    const CountsRecord rec = sample_counts(zero, Basis::Z, 4096, 7);
    REQUIRE(rec.n0 == 4096);
    REQUIRE(rec.n1 == 0);

    const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
    const CountsRecord a = sample_counts(mixed, Basis::Z, 8192, 123);
    const CountsRecord b = sample_counts(mixed, Basis::Z, 8192, 123);
    REQUIRE(a.n0 == b.n0);

    REQUIRE_THROWS_AS(sample_counts(zero, Basis::Z, 0, 1), std::invalid_argument);
}

TEST_CASE("sampling the maximally mixed state concentrates near one half") {
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
    int in_range = 0;
    const int n_seeds = 300;
    for (int seed = 0; seed < n_seeds; ++seed) {
        const CountsRecord rec = sample_counts(mixed, Basis::Z, 8192, 9000 + seed);
        const double frac = static_cast<double>(rec.n0) / 8192.0;
        if (frac >= 0.47 && frac <= 0.53) ++in_range;
    }
    REQUIRE(in_range == n_seeds);  // 0.03 is ~5.4 sigma at 8192 shots
}

TEST_CASE("expectation_from_counts") {
    CountsRecord rec;
    rec.basis = Basis::Z;
    rec.shots = 100;
    rec.n0 = 100;
    rec.n1 = 0;
    REQUIRE(expectation_from_counts(rec) == 1.0);
    rec.n0 = 50;
    rec.n1 = 50;
    REQUIRE(expectation_from_counts(rec) == 0.0);

    // Counts consistent with the measured f0 diagonal: (7775-417)/8192.
    rec.shots = 8192;
    rec.n0 = 7775;
    rec.n1 = 417;
    REQUIRE(expectation_from_counts(rec) == Approx(0.8982).margin(1e-4));

    rec.n1 = 400;
    REQUIRE_THROWS_AS(expectation_from_counts(rec), std::invalid_argument);
}

TEST_CASE("reconstruct named cases") {
    REQUIRE(reconstruct({0.0, 0.0, 1.0}).max_abs_diff(PureState::basis(1, 0).projector()) <
            1e-15);
    REQUIRE(reconstruct({0.0, 0.0, 0.0})
                .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    // The measured f0 expectations invert to the measured f0 matrix.
    REQUIRE(reconstruct({0.0924, 0.1328, 0.8982}).max_abs_diff(table1_f0) < 1e-4);
    REQUIRE_THROWS_AS(reconstruct({1.5, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("exact reconstruction round-trips any single-qubit state") {
    Gen g(70);
    for (int rep = 0; rep < 200; ++rep) {
        const DensityMatrix rho = g.density(2);
        const ComplexMatrix rebuilt = reconstruct(pauli_expectations(rho));
        REQUIRE(rebuilt.max_abs_diff(rho.matrix()) < 1e-12);
    }
}

TEST_CASE("project_to_density clips and renormalizes") {
    Gen g(72);
    const DensityMatrix valid = g.density(2);
    REQUIRE(project_to_density(valid.matrix()).matrix().max_abs_diff(valid.matrix()) < 1e-12);

    const DensityMatrix clipped =
        project_to_density(ComplexMatrix::from_rows({{1.1, 0.0}, {0.0, -0.1}}));
    REQUIRE(clipped.matrix().max_abs_diff(PureState::basis(1, 0).projector()) < 1e-12);

    // A Bloch vector of length 1.02 projects back onto the Bloch sphere.
    const double r = 1.02;
    const double nx = r * 0.6, nz = r * 0.8;
    ComplexMatrix raw(2);
    raw(0, 0) = 0.5 * (1.0 + nz);
    raw(1, 1) = 0.5 * (1.0 - nz);
    raw(0, 1) = 0.5 * nx;
    raw(1, 0) = 0.5 * nx;
    const DensityMatrix proj = project_to_density(raw);
    const PauliExpectations e = pauli_expectations(proj);
    REQUIRE(std::sqrt(e.ex * e.ex + e.ey * e.ey + e.ez * e.ez) == Approx(1.0).margin(1e-10));
    REQUIRE(e.ex / e.ez == Approx(0.6 / 0.8).margin(1e-10));

    REQUIRE_THROWS_AS(project_to_density(ComplexMatrix::from_rows({{0.9, 0.0}, {0.0, 0.2}})),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(project_to_density(ComplexMatrix::from_rows({{1.6, 0.0}, {0.0, -0.6}})),
                      std::invalid_argument);
}

TEST_CASE("sampled reconstruction error shrinks with shots") {
    // Smoke check here; the full O(1/sqrt(shots)) slope and the 1000-seed
    // coverage bound run in the acceptance suite.
    const DensityMatrix rho = DensityMatrix(table1_f0);
    auto mean_td = [&](std::uint64_t shots) {
        double total = 0.0;
        const int n_seeds = 40;
        for (int seed = 0; seed < n_seeds; ++seed) {
            const CountsRecord cx = sample_counts(rho, Basis::X, shots, 100 + seed);
            const CountsRecord cy = sample_counts(rho, Basis::Y, shots, 200 + seed);
            const CountsRecord cz = sample_counts(rho, Basis::Z, shots, 300 + seed);
            total += densim::test::trace_distance(estimate_state(cx, cy, cz), rho);
        }
        return total / n_seeds;
    };
    const double coarse = mean_td(512);
    const double fine = mean_td(32768);
    REQUIRE(fine < coarse / 4.0);  // expect ~1/8 at 64x the shots
    REQUIRE(coarse < 0.1);
}

TEST_CASE("8192-shot counts from the measured f0 state reconstruct it within 2e-2") {
    const DensityMatrix rho = DensityMatrix(table1_f0);
    const CountsRecord cx = sample_counts(rho, Basis::X, 8192, 11);
    const CountsRecord cy = sample_counts(rho, Basis::Y, 8192, 12);
    const CountsRecord cz = sample_counts(rho, Basis::Z, 8192, 13);
    REQUIRE(estimate_state(cx, cy, cz).matrix().max_abs_diff(table1_f0) < 2e-2);
}

TEST_CASE("estimate_state rejects misordered bases") {
    const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
    const CountsRecord cx = sample_counts(rho, Basis::X, 128, 1);
    const CountsRecord cz = sample_counts(rho, Basis::Z, 128, 3);
    REQUIRE_THROWS_AS(estimate_state(cx, cx, cz), std::invalid_argument);
}
