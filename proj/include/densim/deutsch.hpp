// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "densim/channels.hpp"
#include "densim/circuit.hpp"
#include "densim/state.hpp"

namespace densim {

/// The four one-bit oracle functions, in published table order.
enum class OracleKind { F0, FId, FNot, F1 };

inline const std::array<OracleKind, 4>& all_oracles() {
    static const std::array<OracleKind, 4> all = {OracleKind::F0, OracleKind::FId,
                                                  OracleKind::FNot, OracleKind::F1};
    return all;
}

inline bool is_constant(OracleKind k) { return k == OracleKind::F0 || k == OracleKind::F1; }

/// Deterministic algorithm answer: 0 for constant, 1 for balanced.
inline int ideal_bit(OracleKind k) { return is_constant(k) ? 0 : 1; }

/// f(x) truth table.
inline int oracle_value(OracleKind k, int x) {
    switch (k) {
        case OracleKind::F0: return 0;
        case OracleKind::F1: return 1;
        case OracleKind::FId: return x;
        case OracleKind::FNot: return 1 - x;
    }
    throw std::invalid_argument("oracle_value: unknown oracle");
}

inline const char* to_string(OracleKind k) {
    switch (k) {
        case OracleKind::F0: return "f0";
        case OracleKind::FId: return "fId";
        case OracleKind::FNot: return "fNot";
        case OracleKind::F1: return "f1";
    }
    return "?";
}

inline OracleKind parse_oracle(const std::string& s) {
    if (s == "f0") return OracleKind::F0;
    if (s == "fId") return OracleKind::FId;
    if (s == "fNot") return OracleKind::FNot;
    if (s == "f1") return OracleKind::F1;
    throw std::invalid_argument("unknown oracle '" + s + "'");
}

/// Two-qubit oracle block U_f |x>|y> = |x>|y xor f(x)>; qubit 0 carries x.
inline Circuit oracle_circuit(OracleKind k) {
    Circuit c(2);
    switch (k) {
        case OracleKind::F0:
            break;  // y xor 0: nothing to do
        case OracleKind::FId:
            c.add(Gate::Cnot, {0, 1});
            break;
        case OracleKind::FNot:
            c.add(Gate::X, {0}).add(Gate::Cnot, {0, 1}).add(Gate::X, {0});
            break;
        case OracleKind::F1:
            c.add(Gate::X, {1});
            break;
    }
    return c;
}

/// Full pre-measurement pipeline: |00> -> X on the ancilla -> H on both ->
/// oracle -> H on the query qubit.
inline Circuit deutsch_circuit(OracleKind k) {
    Circuit c(2);
    c.add(Gate::X, {1}).add(Gate::H, {0}).add(Gate::H, {1});
    c.append(oracle_circuit(k));
    c.add(Gate::H, {0});
    return c;
}

struct DeutschOutcome {
    DensityMatrix output_state;  // query qubit, ancilla traced out
    int predicted_bit;
    double success_prob;
};

inline DeutschOutcome make_outcome(OracleKind k, const DensityMatrix& query_state) {
    const int bit = ideal_bit(k);
    const double prob = query_state(static_cast<std::size_t>(bit), static_cast<std::size_t>(bit)).real();
    return {query_state, bit, prob};
}

inline DeutschOutcome run_ideal(OracleKind k) {
    const DensityMatrix joint = run_circuit(deutsch_circuit(k), PureState::basis(2, 0));
    return make_outcome(k, partial_trace(joint, {0}));
}

/// Noise acts once on the ideal single-qubit output.
inline DeutschOutcome run_noisy(OracleKind k, const ErrorModel& model) {
    const DeutschOutcome ideal = run_ideal(k);
    return make_outcome(k, model.apply(ideal.predicted_bit, ideal.output_state));
}

}  // namespace densim
