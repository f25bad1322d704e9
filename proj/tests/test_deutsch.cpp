// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "densim/deutsch.hpp"
#include "testutil.hpp"

using namespace densim;
using densim::test::Gen;
using Catch::Approx;

TEST_CASE("oracle classification") {
    REQUIRE(is_constant(OracleKind::F0));
    REQUIRE(is_constant(OracleKind::F1));
    REQUIRE_FALSE(is_constant(OracleKind::FId));
    REQUIRE_FALSE(is_constant(OracleKind::FNot));
    REQUIRE(ideal_bit(OracleKind::F0) == 0);
    REQUIRE(ideal_bit(OracleKind::FNot) == 1);
}

TEST_CASE("every oracle implements U_f|x>|y> = |x>|y xor f(x)>") {
    for (OracleKind k : all_oracles()) {
        const Circuit oracle = oracle_circuit(k);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                const std::size_t in = static_cast<std::size_t>(x * 2 + y);
                const std::size_t out =
                    static_cast<std::size_t>(x * 2 + (y ^ oracle_value(k, x)));
                const DensityMatrix result = run_circuit(oracle, PureState::basis(2, in));
                REQUIRE(result.matrix().max_abs_diff(PureState::basis(2, out).projector()) <
                        1e-12);
            }
    }
}

TEST_CASE("named oracle actions") {
    // constant zero adds nothing
    REQUIRE(run_circuit(oracle_circuit(OracleKind::F0), PureState::basis(2, 2))
                .matrix()
                .max_abs_diff(PureState::basis(2, 2).projector()) < 1e-14);
    // identity: |1>|0> -> |1>|1>
    REQUIRE(run_circuit(oracle_circuit(OracleKind::FId), PureState::basis(2, 2))
                .matrix()
                .max_abs_diff(PureState::basis(2, 3).projector()) < 1e-14);
    // constant one: |0>|0> -> |0>|1>
    REQUIRE(run_circuit(oracle_circuit(OracleKind::F1), PureState::basis(2, 0))
                .matrix()
                .max_abs_diff(PureState::basis(2, 1).projector()) < 1e-14);
}

TEST_CASE("the ideal algorithm is deterministic for all four oracles") {
    for (OracleKind k : all_oracles()) {
        const DeutschOutcome out = run_ideal(k);
        REQUIRE(out.predicted_bit == (is_constant(k) ? 0 : 1));
        REQUIRE(out.success_prob == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("post-oracle query state for the identity function is |->") {
    // Build the pipeline up to (and including) the oracle, then compare
    // density matrices; global phase is invisible there.
    Circuit c(2);
    c.add(Gate::X, {1}).add(Gate::H, {0}).add(Gate::H, {1});
    c.append(oracle_circuit(OracleKind::FId));
    const DensityMatrix joint = run_circuit(c, PureState::basis(2, 0));
    const DensityMatrix q0 = partial_trace(joint, {0});
    const PureState minus({inv_sqrt2, -inv_sqrt2});
    REQUIRE(q0.matrix().max_abs_diff(minus.projector()) < 1e-12);
}

TEST_CASE("run_noisy with the identity model equals run_ideal") {
    for (OracleKind k : all_oracles()) {
        const DeutschOutcome ideal = run_ideal(k);
        const DeutschOutcome noisy = run_noisy(k, ErrorModel::identity());
        REQUIRE(noisy.success_prob == Approx(ideal.success_prob).margin(1e-12));
        REQUIRE(noisy.output_state.matrix().max_abs_diff(ideal.output_state.matrix()) < 1e-12);
    }
}

TEST_CASE("run_noisy with damping only reproduces the closed-form diagonals") {
    const GadParams prm = densim::test::reference().gad;
    const ErrorModel model = ErrorModel::gad_only(prm);
    const DeutschOutcome f0 = run_noisy(OracleKind::F0, model);
    REQUIRE(f0.success_prob == Approx(1.0 - (1.0 - prm.p) * prm.gamma).margin(1e-12));
    REQUIRE(f0.success_prob == Approx(0.9564).margin(5e-5));

    const DeutschOutcome fid = run_noisy(OracleKind::FId, model);
    REQUIRE(fid.success_prob == Approx(1.0 - prm.p * prm.gamma).margin(1e-12));
    REQUIRE(fid.success_prob == Approx(0.8489).margin(5e-5));
}

TEST_CASE("run_noisy stays physical for random trace-preserving models") {
    Gen g(50);
    for (int rep = 0; rep < 50; ++rep) {
        ErrorModel model;
        model.gad = GadParams{g.uniform(0.0, 1.0), g.uniform(0.51, 1.0)};
        model.gates.emplace(g.unitary(2), g.unitary(2));
        const DeutschOutcome out = run_noisy(all_oracles()[rep % 4], model);
        REQUIRE(out.success_prob >= 0.0);
        REQUIRE(out.success_prob <= 1.0);
        REQUIRE(std::abs(out.output_state.matrix().trace().real() - 1.0) < 1e-10);
    }
}
