// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "densim/complex_matrix.hpp"
#include "densim/eig.hpp"
#include "densim/state.hpp"

namespace densim {

inline constexpr double kraus_completeness_tol = 1e-10;

/// Trace-preserving operation in operator-sum form,
/// rho -> sum_k E_k rho E_k^dagger with sum_k E_k^dagger E_k = I.
class KrausChannel {
public:
    KrausChannel(std::vector<ComplexMatrix> ops, std::string label)
        : ops_(std::move(ops)), label_(std::move(label)) {
        if (ops_.empty()) throw std::invalid_argument("KrausChannel: no operators");
        const std::size_t d = ops_.front().dim();
        ComplexMatrix sum(d);
        for (const ComplexMatrix& e : ops_) {
            if (e.dim() != d) throw std::invalid_argument("KrausChannel: mixed dimensions");
            e.check_finite();
            sum = sum + e.adjoint() * e;
        }
        if (sum.max_abs_diff(ComplexMatrix::identity(d)) > kraus_completeness_tol)
            throw std::invalid_argument("KrausChannel: not trace-preserving");
    }

    std::size_t dim() const { return ops_.front().dim(); }
    const std::vector<ComplexMatrix>& ops() const { return ops_; }
    const std::string& label() const { return label_; }

private:
    std::vector<ComplexMatrix> ops_;
    std::string label_;
};

/// Damping probability gamma and thermal-population parameter p.
struct GadParams {
    double gamma = 0.0;
    double p = 1.0;

    GadParams() = default;
    GadParams(double gamma_, double p_) : gamma(gamma_), p(p_) {
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw std::invalid_argument("GadParams: gamma must be in [0,1]");
        if (!(p > 0.5 && p <= 1.0))
            throw std::invalid_argument("GadParams: p must be in (1/2, 1]");
    }
};

/// The published operator list misprints E1 as diag(0, sqrt(gamma)),
/// which fixes |1><1| and cannot leak population upward. `Standard`
/// uses the textbook raising form; `PublishedLiteral` reproduces the
/// misprint for comparison runs (it is still trace-preserving).
enum class GadForm { Standard, PublishedLiteral };

inline KrausChannel gad_channel(const GadParams& prm, GadForm form = GadForm::Standard) {
    const double sp = std::sqrt(prm.p);
    const double sq = std::sqrt(1.0 - prm.p);
    const double sg = std::sqrt(prm.gamma);
    const double s1g = std::sqrt(1.0 - prm.gamma);

    ComplexMatrix e0 = ComplexMatrix::from_rows({{sp, 0.0}, {0.0, sp * s1g}});
    ComplexMatrix e1 = form == GadForm::Standard
                           ? ComplexMatrix::from_rows({{0.0, sp * sg}, {0.0, 0.0}})
                           : ComplexMatrix::from_rows({{0.0, 0.0}, {0.0, sp * sg}});
    ComplexMatrix e2 = ComplexMatrix::from_rows({{sq * s1g, 0.0}, {0.0, sq}});
    ComplexMatrix e3 = ComplexMatrix::from_rows({{0.0, 0.0}, {sq * sg, 0.0}});
    return KrausChannel({e0, e1, e2, e3},
                        form == GadForm::Standard ? "gad" : "gad-published-literal");
}

inline DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho) {
    if (ch.dim() != rho.dim()) throw std::invalid_argument("apply_channel: dimension mismatch");
    ComplexMatrix out(rho.dim());
    for (const ComplexMatrix& e : ch.ops()) out = out + e * rho.matrix() * e.adjoint();
    return DensityMatrix(std::move(out));
}

enum class Pauli { X, Y, Z };

inline ComplexMatrix pauli_matrix(Pauli p) {
    switch (p) {
        case Pauli::X: return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
        case Pauli::Y: return ComplexMatrix::from_rows({{0.0, {0.0, -1.0}}, {{0.0, 1.0}, 0.0}});
        case Pauli::Z: return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
    }
    throw std::invalid_argument("pauli_matrix: unknown axis");
}

/// Systematic over-rotation G = exp(i eps sigma) = cos(eps) I + i sin(eps) sigma.
inline ComplexMatrix rotation_error(Pauli axis, double epsilon) {
    if (!std::isfinite(epsilon)) throw std::invalid_argument("rotation_error: non-finite angle");
    const ComplexMatrix sigma = pauli_matrix(axis);
    ComplexMatrix g = ComplexMatrix::identity(2);
    const cplx c = std::cos(epsilon), is = cplx{0.0, std::sin(epsilon)};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) g(i, j) = c * (i == j ? 1.0 : 0.0) + is * sigma(i, j);
    return g;
}

/// How a stored misalignment gate is turned into the applied unitary.
/// The published gate entries are rounded and their intended convention
/// is ambiguous; reports pick the variant that best explains the data.
enum class Interpretation { AsPrinted, Adjoint, Transpose, Conjugate };

inline const char* to_string(Interpretation in) {
    switch (in) {
        case Interpretation::AsPrinted: return "as-printed";
        case Interpretation::Adjoint: return "adjoint";
        case Interpretation::Transpose: return "transpose";
        case Interpretation::Conjugate: return "conjugate";
    }
    return "?";
}

inline Interpretation parse_interpretation(const std::string& s) {
    if (s == "as-printed") return Interpretation::AsPrinted;
    if (s == "adjoint") return Interpretation::Adjoint;
    if (s == "transpose") return Interpretation::Transpose;
    if (s == "conjugate") return Interpretation::Conjugate;
    throw std::invalid_argument("unknown interpretation '" + s + "'");
}

inline ComplexMatrix gate_variant(const ComplexMatrix& g, Interpretation in) {
    switch (in) {
        case Interpretation::AsPrinted: return g;
        case Interpretation::Adjoint: return g.adjoint();
        case Interpretation::Transpose: return g.transpose();
        case Interpretation::Conjugate: return g.conjugate();
    }
    throw std::invalid_argument("gate_variant: unknown interpretation");
}

inline const std::vector<Interpretation>& all_interpretations() {
    static const std::vector<Interpretation> all = {
        Interpretation::AsPrinted, Interpretation::Adjoint, Interpretation::Transpose,
        Interpretation::Conjugate};
    return all;
}

/// Outcome-conditional misalignment gates. Inputs are polar-projected to
/// the nearest unitary, so rounded published entries are accepted.
class MaGates {
public:
    MaGates(const ComplexMatrix& g0, const ComplexMatrix& g1)
        : g0_(polar_unitary(g0)), g1_(polar_unitary(g1)) {
        if (g0.dim() != 2 || g1.dim() != 2)
            throw std::invalid_argument("MaGates: gates must be single-qubit");
    }

    const ComplexMatrix& g0() const { return g0_; }
    const ComplexMatrix& g1() const { return g1_; }
    const ComplexMatrix& gate_for(int ideal_bit) const {
        if (ideal_bit != 0 && ideal_bit != 1)
            throw std::invalid_argument("MaGates: ideal bit must be 0 or 1");
        return ideal_bit == 0 ? g0_ : g1_;
    }

private:
    ComplexMatrix g0_;
    ComplexMatrix g1_;
};

inline DensityMatrix ma_apply(const MaGates& gates, int ideal_bit, const DensityMatrix& rho,
                              Interpretation in = Interpretation::AsPrinted) {
    if (rho.dim() != 2) throw std::invalid_argument("ma_apply: state must be single-qubit");
    return apply_unitary(rho, gate_variant(gates.gate_for(ideal_bit), in));
}

inline KrausChannel unitary_channel(const ComplexMatrix& u, std::string label = "unitary") {
    if (!u.is_unitary(1e-10)) throw std::invalid_argument("unitary_channel: not unitary");
    return KrausChannel({u}, std::move(label));
}

inline KrausChannel identity_channel(std::size_t dim) {
    return KrausChannel({ComplexMatrix::identity(dim)}, "identity");
}

/// Sequential action: compose(first, second)(rho) = second(first(rho)).
inline KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
    if (first.dim() != second.dim()) throw std::invalid_argument("compose: dimension mismatch");
    std::vector<ComplexMatrix> ops;
    ops.reserve(first.ops().size() * second.ops().size());
    for (const ComplexMatrix& f : second.ops())
        for (const ComplexMatrix& e : first.ops()) ops.push_back(f * e);
    return KrausChannel(std::move(ops), second.label() + "∘" + first.label());
}

enum class ModelOrder { MaThenGad, GadThenMa };

inline ModelOrder parse_order(const std::string& s) {
    if (s == "ma-then-gad") return ModelOrder::MaThenGad;
    if (s == "gad-then-ma") return ModelOrder::GadThenMa;
    throw std::invalid_argument("unknown order '" + s + "'");
}

inline const char* to_string(ModelOrder o) {
    return o == ModelOrder::MaThenGad ? "ma-then-gad" : "gad-then-ma";
}

/// Composite noise model acting once on the final single-qubit state:
/// an outcome-conditional misalignment unitary plus decoherence, in a
/// configurable order.
struct ErrorModel {
    std::optional<MaGates> gates;
    Interpretation interp0 = Interpretation::AsPrinted;
    Interpretation interp1 = Interpretation::AsPrinted;
    GadParams gad{0.0, 1.0};
    GadForm form = GadForm::Standard;
    ModelOrder order = ModelOrder::MaThenGad;

    static ErrorModel identity() { return {}; }

    static ErrorModel gad_only(GadParams prm, GadForm f = GadForm::Standard) {
        ErrorModel m;
        m.gad = prm;
        m.form = f;
        return m;
    }

    DensityMatrix apply(int ideal_bit, const DensityMatrix& rho) const {
        if (ideal_bit != 0 && ideal_bit != 1)
            throw std::invalid_argument("ErrorModel: ideal bit must be 0 or 1");
        const Interpretation in = ideal_bit == 0 ? interp0 : interp1;
        DensityMatrix out = rho;
        if (order == ModelOrder::MaThenGad && gates) out = ma_apply(*gates, ideal_bit, out, in);
        if (gad.gamma > 0.0) out = apply_channel(gad_channel(gad, form), out);
        if (order == ModelOrder::GadThenMa && gates) out = ma_apply(*gates, ideal_bit, out, in);
        return out;
    }
};

}  // namespace densim
