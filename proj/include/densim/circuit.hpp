// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "densim/complex_matrix.hpp"
#include "densim/gates.hpp"
#include "densim/state.hpp"

namespace densim {

/// Full-register unitary for `op` acting on the listed target qubits
/// (first target = first tensor factor of the gate). Untouched qubits
/// get identities. Qubit 0 is the leftmost factor / most significant bit.
inline ComplexMatrix embed(const ComplexMatrix& op, const std::vector<std::size_t>& targets,
                           std::size_t n_qubits) {
    const std::size_t gate_qubits = qubit_count(op.dim());
    if (targets.size() != gate_qubits)
        throw std::invalid_argument("embed: target count does not match gate arity");
    for (std::size_t t : targets)
        if (t >= n_qubits) throw std::invalid_argument("embed: target out of range");
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = i + 1; j < targets.size(); ++j)
            if (targets[i] == targets[j])
                throw std::invalid_argument("embed: duplicate target qubit");

    const std::size_t dim = std::size_t{1} << n_qubits;
    auto sub_index = [&](std::size_t full) {
        std::size_t s = 0;
        for (std::size_t a = 0; a < targets.size(); ++a)
            s = (s << 1) | ((full >> (n_qubits - 1 - targets[a])) & 1u);
        return s;
    };
    std::size_t rest_mask = dim - 1;
    for (std::size_t t : targets) rest_mask &= ~(std::size_t{1} << (n_qubits - 1 - t));

    ComplexMatrix out(dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            if ((r & rest_mask) != (c & rest_mask)) continue;
            out(r, c) = op(sub_index(r), sub_index(c));
        }
    return out;
}

/// Ordered gate list over a fixed register; steps validated on insertion.
class Circuit {
public:
    struct Step {
        ComplexMatrix op;
        std::vector<std::size_t> targets;
    };

    explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 1 || n_qubits > 3)
            throw std::invalid_argument("Circuit: qubit count must be 1..3");
    }

    Circuit& add(const ComplexMatrix& op, std::vector<std::size_t> targets) {
        if (!op.is_unitary(1e-10)) throw std::invalid_argument("Circuit: step is not unitary");
        embed(op, targets, n_qubits_);  // validates targets
        steps_.push_back({op, std::move(targets)});
        return *this;
    }

    Circuit& add(Gate g, std::vector<std::size_t> targets) {
        return add(standard_gate(g), std::move(targets));
    }

    std::size_t n_qubits() const { return n_qubits_; }
    const std::vector<Step>& steps() const { return steps_; }

    /// Concatenate another circuit's steps (same register width).
    Circuit& append(const Circuit& other) {
        if (other.n_qubits_ != n_qubits_)
            throw std::invalid_argument("Circuit::append: register width mismatch");
        for (const Step& s : other.steps_) steps_.push_back(s);
        return *this;
    }

private:
    std::size_t n_qubits_;
    std::vector<Step> steps_;
};

inline DensityMatrix run_circuit(const Circuit& c, const DensityMatrix& input) {
    if (input.dim() != (std::size_t{1} << c.n_qubits()))
        throw std::invalid_argument("run_circuit: input dimension mismatch");
    DensityMatrix rho = input;
    for (const Circuit::Step& s : c.steps())
        rho = apply_unitary(rho, embed(s.op, s.targets, c.n_qubits()));
    return rho;
}

inline DensityMatrix run_circuit(const Circuit& c, const PureState& input) {
    return run_circuit(c, DensityMatrix::pure(input));
}

}  // namespace densim
