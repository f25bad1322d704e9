// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <string_view>

#include "densim/complex_matrix.hpp"

namespace densim {

enum class Gate { H, X, Y, Z, SDagger, Cnot };

inline constexpr double inv_sqrt2 = 0.70710678118654752440;

inline ComplexMatrix standard_gate(Gate g) {
    switch (g) {
        case Gate::H:
            return ComplexMatrix::from_rows({{inv_sqrt2, inv_sqrt2}, {inv_sqrt2, -inv_sqrt2}});
        case Gate::X:
            return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
        case Gate::Y:
            return ComplexMatrix::from_rows({{0.0, {0.0, -1.0}}, {{0.0, 1.0}, 0.0}});
        case Gate::Z:
            return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
        case Gate::SDagger:
            return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, {0.0, -1.0}}});
        case Gate::Cnot:
            return ComplexMatrix::from_rows({{1.0, 0.0, 0.0, 0.0},
                                             {0.0, 1.0, 0.0, 0.0},
                                             {0.0, 0.0, 0.0, 1.0},
                                             {0.0, 0.0, 1.0, 0.0}});
    }
    throw std::invalid_argument("standard_gate: unknown gate");
}

inline ComplexMatrix standard_gate(std::string_view name) {
    if (name == "H") return standard_gate(Gate::H);
    if (name == "X") return standard_gate(Gate::X);
    if (name == "Y") return standard_gate(Gate::Y);
    if (name == "Z") return standard_gate(Gate::Z);
    if (name == "S_dagger" || name == "Sdg") return standard_gate(Gate::SDagger);
    if (name == "Cnot" || name == "CNOT" || name == "CX") return standard_gate(Gate::Cnot);
    throw std::invalid_argument("standard_gate: unknown gate name '" + std::string(name) + "'");
}

}  // namespace densim
