// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "densim/circuit.hpp"
#include "testutil.hpp"

using namespace densim;
using densim::test::Gen;

TEST_CASE("embed places single-qubit gates with qubit 0 leftmost") {
    const ComplexMatrix x = standard_gate(Gate::X);
    REQUIRE(embed(x, {0}, 2).max_abs_diff(kron(x, ComplexMatrix::identity(2))) < 1e-15);
    REQUIRE(embed(x, {1}, 2).max_abs_diff(kron(ComplexMatrix::identity(2), x)) < 1e-15);
    REQUIRE(embed(x, {1}, 3).max_abs_diff(
                kron(kron(ComplexMatrix::identity(2), x), ComplexMatrix::identity(2))) < 1e-15);
}

TEST_CASE("embed supports reversed two-qubit targets") {
    // Cnot with control q1, target q0: |x y> -> |x xor y, y>.
    const ComplexMatrix rev = embed(standard_gate(Gate::Cnot), {1, 0}, 2);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) {
            const std::size_t in = x * 2 + y;
            const std::size_t out = (x ^ y) * 2 + y;
            REQUIRE(rev(out, in) == cplx{1.0});
        }
}

TEST_CASE("embed validates targets") {
    const ComplexMatrix x = standard_gate(Gate::X);
    REQUIRE_THROWS_AS(embed(x, {2}, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(embed(standard_gate(Gate::Cnot), {0, 0}, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(embed(x, {0, 1}, 2), std::invalid_argument);
}

TEST_CASE("circuit rejects non-unitary steps") {
    Circuit c(2);
    REQUIRE_THROWS_AS(c.add(ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.5}}), {0}),
                      std::invalid_argument);
}

TEST_CASE("empty circuit leaves the input unchanged") {
    Gen g(3);
    const DensityMatrix rho = g.density(4);
    REQUIRE(run_circuit(Circuit(2), rho).matrix().max_abs_diff(rho.matrix()) == 0.0);
}

TEST_CASE("X on qubit 1 maps |00> to |01>") {
    Circuit c(2);
    c.add(Gate::X, {1});
    const DensityMatrix out = run_circuit(c, PureState::basis(2, 0));
    REQUIRE(out.matrix().max_abs_diff(PureState::basis(2, 1).projector()) < 1e-14);
}

TEST_CASE("constant-zero pipeline yields |0> on the query qubit") {
    // H on q0 and H X on q1, the empty oracle, then H on q0.
    Circuit c(2);
    c.add(Gate::X, {1}).add(Gate::H, {0}).add(Gate::H, {1}).add(Gate::H, {0});
    const DensityMatrix out = run_circuit(c, PureState::basis(2, 0));
    const DensityMatrix q0 = partial_trace(out, {0});
    REQUIRE(q0.matrix().max_abs_diff(PureState::basis(1, 0).projector()) < 1e-12);
    // The pre-measurement joint state is a product, so tracing is exact:
    // q1 stays in |->.
    const DensityMatrix q1 = partial_trace(out, {1});
    REQUIRE(q1.matrix().max_abs_diff(
                ComplexMatrix::from_rows({{0.5, -0.5}, {-0.5, 0.5}})) < 1e-12);
}

TEST_CASE("run_circuit checks dimensions") {
    Circuit c(2);
    REQUIRE_THROWS_AS(run_circuit(c, DensityMatrix::maximally_mixed(2)), std::invalid_argument);
}
