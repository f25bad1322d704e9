// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "densim/channels.hpp"
#include "densim/deutsch.hpp"
#include "densim/metrics.hpp"
#include "densim/state.hpp"

namespace densim {

// ---------------------------------------------------------------------------
// Derivative-free minimizer
// ---------------------------------------------------------------------------

struct SimplexOptions {
    double tolerance = 1e-10;  // simplex diameter
    int max_iters = 4000;
    double initial_step = 0.05;  // fraction of each bound range
};

struct SimplexResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;
using Bounds = std::vector<std::pair<double, double>>;

/// Downhill simplex with box projection. Deterministic; the returned
/// point is the best one ever evaluated, so the result is never worse
/// than the starting point.
inline SimplexResult simplex_minimize(const Objective& objective, std::vector<double> x0,
                                      const Bounds& bounds, const SimplexOptions& opts = {}) {
    const std::size_t n = x0.size();
    if (bounds.size() != n) throw std::invalid_argument("simplex_minimize: bounds size mismatch");
    for (std::size_t i = 0; i < n; ++i)
        if (!(bounds[i].first <= bounds[i].second))
            throw std::invalid_argument("simplex_minimize: inconsistent bounds");

    auto clamp = [&](std::vector<double> x) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = std::clamp(x[i], bounds[i].first, bounds[i].second);
        return x;
    };

    x0 = clamp(std::move(x0));
    SimplexResult best{x0, objective(x0), 0};
    if (!std::isfinite(best.f))
        throw std::invalid_argument("simplex_minimize: objective not finite at start");

    auto eval = [&](const std::vector<double>& x) {
        const double f = objective(x);
        if (std::isfinite(f) && f < best.f) {
            best.f = f;
            best.x = x;
        }
        return f;
    };

    std::vector<std::vector<double>> verts(n + 1, x0);
    std::vector<double> fv(n + 1);
    fv[0] = best.f;
    for (std::size_t i = 0; i < n; ++i) {
        double step = opts.initial_step * (bounds[i].second - bounds[i].first);
        if (step == 0.0) step = opts.initial_step;
        if (x0[i] + step > bounds[i].second) step = -step;
        verts[i + 1][i] += step;
        verts[i + 1] = clamp(std::move(verts[i + 1]));
        fv[i + 1] = eval(verts[i + 1]);
    }

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> sv(n + 1);
        std::vector<double> sf(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            sv[i] = verts[order[i]];
            sf[i] = fv[order[i]];
        }
        verts = std::move(sv);
        fv = std::move(sf);

        double diameter = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            double d = 0.0;
            for (std::size_t k = 0; k < n; ++k) d += std::abs(verts[i][k] - verts[0][k]);
            diameter = std::max(diameter, d);
        }
        if (diameter < opts.tolerance) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) centroid[k] += verts[i][k] / static_cast<double>(n);

        auto along = [&](double coeff) {
            std::vector<double> x(n);
            for (std::size_t k = 0; k < n; ++k)
                x[k] = centroid[k] + coeff * (centroid[k] - verts[n][k]);
            return clamp(std::move(x));
        };

        const std::vector<double> xr = along(alpha);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            const std::vector<double> xe = along(gamma);
            const double fe = eval(xe);
            if (fe < fr) {
                verts[n] = xe;
                fv[n] = fe;
            } else {
                verts[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            verts[n] = xr;
            fv[n] = fr;
        } else {
            const std::vector<double> xc = along(fr < fv[n] ? rho : -rho);
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[n])) {
                verts[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t k = 0; k < n; ++k)
                        verts[i][k] = verts[0][k] + sigma * (verts[i][k] - verts[0][k]);
                    verts[i] = clamp(std::move(verts[i]));
                    fv[i] = eval(verts[i]);
                }
            }
        }
    }
    best.iterations = iter;
    return best;
}

// ---------------------------------------------------------------------------
// Model pieces
// ---------------------------------------------------------------------------

/// Euler parameterization of a single-qubit unitary, global phase dropped:
/// U = [[cos(t/2), -e^{i l} sin(t/2)], [e^{i f} sin(t/2), e^{i(f+l)} cos(t/2)]].
struct UnitaryParams {
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;

    ComplexMatrix matrix() const {
        const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
        const cplx el = std::polar(1.0, lambda), ef = std::polar(1.0, phi);
        return ComplexMatrix::from_rows({{c, -el * s}, {ef * s, ef * el * c}});
    }

    /// theta into [0, pi], phi and lambda into [-pi, pi). Uses
    /// U(-t, f, l) = U(t, f+pi, l+pi) and 2*pi periodicity at the
    /// density-matrix level.
    UnitaryParams canonical() const {
        auto wrap = [](double a) {
            a = std::fmod(a + M_PI, 2.0 * M_PI);
            if (a < 0.0) a += 2.0 * M_PI;
            return a - M_PI;
        };
        double t = wrap(theta), f = phi, l = lambda;
        if (t < 0.0) {
            t = -t;
            f += M_PI;
            l += M_PI;
        }
        return {t, wrap(f), wrap(l)};
    }
};

namespace detail {

/// Hermitian 2x2 carried as (r00, r01, r11); the fast route used inside
/// objective loops. Must agree with the general matrix path (tested).
struct Herm2 {
    double r00 = 0.0;
    cplx r01{};
    double r11 = 0.0;
};

inline Herm2 to_herm2(const DensityMatrix& rho) {
    return {rho(0, 0).real(), rho(0, 1), rho(1, 1).real()};
}

inline Herm2 gad_fast(const Herm2& r, double gamma, double p) {
    return {r.r00 * (1.0 - gamma * (1.0 - p)) + p * gamma * r.r11,
            std::sqrt(1.0 - gamma) * r.r01,
            r.r11 * (1.0 - p * gamma) + (1.0 - p) * gamma * r.r00};
}

/// U(theta,phi,lambda)|b><b|U^dagger; independent of lambda by phase
/// invariance.
inline Herm2 rotated_pole(int bit, double theta, double phi) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const cplx ef = std::polar(1.0, phi);
    cplx a0, a1;
    if (bit == 0) {
        a0 = c;
        a1 = ef * s;
    } else {
        a0 = -s;
        a1 = ef * c;
    }
    return {std::norm(a0), a0 * std::conj(a1), std::norm(a1)};
}

inline double fidelity_fast(const Herm2& a, const Herm2& b) {
    const double tr = a.r00 * b.r00 + a.r11 * b.r11 + 2.0 * (a.r01 * std::conj(b.r01)).real();
    const double da = std::max(a.r00 * a.r11 - std::norm(a.r01), 0.0);
    const double db = std::max(b.r00 * b.r11 - std::norm(b.r01), 0.0);
    return std::clamp(std::sqrt(std::max(tr + 2.0 * std::sqrt(da * db), 0.0)), 0.0, 1.0);
}

inline double frobenius2_fast(const Herm2& a, const Herm2& b) {
    const double d0 = a.r00 - b.r00, d1 = a.r11 - b.r11;
    return d0 * d0 + d1 * d1 + 2.0 * std::norm(a.r01 - b.r01);
}

inline Herm2 model_state(int bit, double gamma, double p,
                         const std::optional<std::pair<double, double>>& gate_angles) {
    Herm2 in = gate_angles ? rotated_pole(bit, gate_angles->first, gate_angles->second)
                           : Herm2{bit == 0 ? 1.0 : 0.0, cplx{}, bit == 1 ? 1.0 : 0.0};
    return gad_fast(in, gamma, p);
}

/// Canonical form with the lambda gauge pinned to zero: pole actions do
/// not depend on lambda, so fitted gates are reported in this gauge.
inline UnitaryParams pole_gauge(UnitaryParams u) {
    u = u.canonical();
    u.lambda = 0.0;
    return u;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

enum class ObjectiveKind { FidelitySum, Frobenius };

inline const char* to_string(ObjectiveKind k) {
    return k == ObjectiveKind::FidelitySum ? "fidelity-sum" : "frobenius";
}

inline ObjectiveKind parse_objective(const std::string& s) {
    if (s == "fidelity" || s == "fidelity-sum") return ObjectiveKind::FidelitySum;
    if (s == "frobenius") return ObjectiveKind::Frobenius;
    throw std::invalid_argument("unknown objective '" + s + "'");
}

struct FitEntry {
    OracleKind oracle;
    int bit;
    DensityMatrix observed;

    FitEntry(OracleKind k, DensityMatrix obs)
        : oracle(k), bit(densim::ideal_bit(k)), observed(std::move(obs)) {}
    FitEntry(OracleKind k, int ideal, DensityMatrix obs)
        : oracle(k), bit(ideal), observed(std::move(obs)) {}
};

using FitDataset = std::vector<FitEntry>;

inline void check_dataset(const FitDataset& data) {
    if (data.empty() || data.size() > 4) throw std::invalid_argument("fit: dataset must hold 1..4 entries");
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].observed.dim() != 2)
            throw std::invalid_argument("fit: observed states must be single-qubit");
        if (data[i].bit != 0 && data[i].bit != 1)
            throw std::invalid_argument("fit: ideal bit must be 0 or 1");
        for (std::size_t j = i + 1; j < data.size(); ++j)
            if (data[i].oracle == data[j].oracle)
                throw std::invalid_argument("fit: duplicate oracle in dataset");
    }
}

struct FitResult {
    GadParams gad;
    std::optional<MaGates> gates;
    std::optional<UnitaryParams> u0, u1;
    double objective_value = 0.0;  // sum of fidelities, or sum of squared residuals
    ObjectiveKind objective_kind = ObjectiveKind::FidelitySum;
    std::vector<double> per_oracle_fidelity;
    bool p_identifiable = true;
};

inline constexpr double gad_p_lo = 0.5 + 1e-9;

namespace detail {

inline double gad_objective(const FitDataset& data, const std::vector<Herm2>& obs, double gamma,
                            double p, ObjectiveKind kind) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Herm2 m = model_state(data[i].bit, gamma, p, std::nullopt);
        total += kind == ObjectiveKind::FidelitySum ? -fidelity_fast(m, obs[i])
                                                    : frobenius2_fast(m, obs[i]);
    }
    return total;
}

inline std::vector<double> report_fidelities(const FitDataset& data, const GadParams& prm,
                                             const std::optional<MaGates>& gates,
                                             Interpretation in = Interpretation::AsPrinted) {
    std::vector<double> out;
    const KrausChannel ch = gad_channel(prm);
    for (const FitEntry& e : data) {
        DensityMatrix state = DensityMatrix::pure(PureState::basis(1, e.bit));
        if (gates) state = ma_apply(*gates, e.bit, state, in);
        state = prm.gamma > 0.0 ? apply_channel(ch, state) : state;
        out.push_back(fidelity(state, e.observed));
    }
    return out;
}

}  // namespace detail

/// Fit (gamma, p) against observed states for the given oracles, with
/// the model acting on the ideal pole states. Coarse 50x50 grid, then
/// simplex refinement.
inline FitResult fit_gad(const FitDataset& data, ObjectiveKind kind = ObjectiveKind::FidelitySum) {
    check_dataset(data);
    std::vector<detail::Herm2> obs;
    for (const FitEntry& e : data) obs.push_back(detail::to_herm2(e.observed));

    auto objective = [&](const std::vector<double>& x) {
        return detail::gad_objective(data, obs, x[0], x[1], kind);
    };

    double best_f = 0.0;
    std::vector<double> best_x;
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) {
            const double g = static_cast<double>(i) / 49.0;
            const double p = gad_p_lo + (1.0 - gad_p_lo) * (static_cast<double>(j) + 1.0) / 50.0;
            const double f = objective({g, p});
            if (best_x.empty() || f < best_f) {
                best_f = f;
                best_x = {g, p};
            }
        }

    const Bounds bounds = {{0.0, 1.0}, {gad_p_lo, 1.0}};
    const SimplexResult r = simplex_minimize(objective, best_x, bounds);

    FitResult out;
    out.gad = GadParams{std::clamp(r.x[0], 0.0, 1.0), std::clamp(r.x[1], gad_p_lo, 1.0)};
    out.objective_kind = kind;
    out.objective_value = kind == ObjectiveKind::FidelitySum ? -r.f : r.f;
    out.per_oracle_fidelity = detail::report_fidelities(data, out.gad, std::nullopt);
    out.p_identifiable = out.gad.gamma >= 1e-3;
    return out;
}

/// Best misalignment unitary for one observed state under a fixed GAD:
/// maximizes Fid(GAD(U|b><b|U^dagger), observed) over (theta, phi, lambda).
/// The returned fidelity is never below the U = I value.
inline std::pair<UnitaryParams, double> fit_unitary(const DensityMatrix& observed, int ideal_bit,
                                                    const GadParams& prm) {
    if (observed.dim() != 2) throw std::invalid_argument("fit_unitary: single-qubit only");
    if (ideal_bit != 0 && ideal_bit != 1) throw std::invalid_argument("fit_unitary: bad ideal bit");
    const detail::Herm2 obs = detail::to_herm2(observed);

    auto objective = [&](const std::vector<double>& x) {
        return -detail::fidelity_fast(
            detail::model_state(ideal_bit, prm.gamma, prm.p, std::make_pair(x[0], x[1])), obs);
    };

    // theta = 0 is on the grid so the identity gate is always a candidate.
    std::vector<std::pair<double, std::vector<double>>> seeds;
    for (int i = 0; i < 25; ++i)
        for (int j = 0; j < 24; ++j) {
            const double theta = M_PI * static_cast<double>(i) / 24.0;
            const double phi = -M_PI + 2.0 * M_PI * static_cast<double>(j) / 24.0;
            seeds.emplace_back(objective({theta, phi}), std::vector<double>{theta, phi});
        }
    std::stable_sort(seeds.begin(), seeds.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    const Bounds bounds = {{-M_PI, 2.0 * M_PI}, {-2.0 * M_PI, 2.0 * M_PI}};
    SimplexResult best;
    bool have = false;
    for (std::size_t s = 0; s < 3 && s < seeds.size(); ++s) {
        const SimplexResult r = simplex_minimize(objective, seeds[s].second, bounds,
                                                 {1e-12, 4000, 0.02});
        if (!have || r.f < best.f) {
            best = r;
            have = true;
        }
    }
    const UnitaryParams u = detail::pole_gauge({best.x[0], best.x[1], 0.0});
    return {u, -best.f};
}

/// Joint fit of (gamma, p) and one misalignment gate per ideal bit over
/// all four oracles: deterministic multi-start simplex (staged seed plus
/// a 16-point lattice), merged by (objective, start index).
inline FitResult fit_joint(const FitDataset& data) {
    check_dataset(data);
    if (data.size() != 4) throw std::invalid_argument("fit_joint: all four oracles required");
    std::vector<detail::Herm2> obs;
    for (const FitEntry& e : data) obs.push_back(detail::to_herm2(e.observed));

    // x = (gamma, p, theta0, phi0, theta1, phi1); the lambda angles are
    // pure gauge for per-bit action and fixed to zero.
    auto objective = [&](const std::vector<double>& x) {
        double total = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const int b = data[i].bit;
            const detail::Herm2 m = detail::model_state(
                b, std::clamp(x[0], 0.0, 1.0), std::clamp(x[1], gad_p_lo, 1.0),
                std::make_pair(x[2 + 2 * b], x[3 + 2 * b]));
            total -= detail::fidelity_fast(m, obs[i]);
        }
        return total;
    };

    // Staged seed: moment-matched GAD, then per-bit unitary fits.
    double mean_up = 0.0, mean_down = 0.0;
    int n_up = 0, n_down = 0;
    for (const FitEntry& e : data) {
        if (e.bit == 1) {
            mean_up += e.observed(0, 0).real();
            ++n_up;
        } else {
            mean_down += e.observed(1, 1).real();
            ++n_down;
        }
    }
    const double gp = n_up ? mean_up / n_up : 0.05;       // ~ p*gamma
    const double gq = n_down ? mean_down / n_down : 0.05;  // ~ (1-p)*gamma
    const double g0 = std::clamp(gp + gq, 1e-3, 1.0);
    const double p0 = std::clamp(gp / g0, gad_p_lo, 1.0);
    const GadParams staged_gad{g0, p0};
    std::vector<double> staged = {g0, p0, 0.05, 0.0, 0.05, 0.0};
    for (const FitEntry& e : data) {
        const auto [u, f] = fit_unitary(e.observed, e.bit, staged_gad);
        staged[2 + 2 * e.bit] = u.theta;
        staged[3 + 2 * e.bit] = u.phi;
    }

    std::vector<std::vector<double>> starts = {staged};
    for (double g : {0.1, 0.3})
        for (double p : {0.6, 0.9})
            for (double t0 : {0.05, 0.4})
                for (double t1 : {0.05, 0.4})
                    starts.push_back({g, p, t0, staged[3], t1, staged[5]});

    const Bounds bounds = {{0.0, 1.0},       {gad_p_lo, 1.0},     {-M_PI, M_PI},
                           {-2.0 * M_PI, 2.0 * M_PI}, {-M_PI, M_PI}, {-2.0 * M_PI, 2.0 * M_PI}};
    SimplexResult best;
    bool have = false;
    for (const auto& start : starts) {
        const SimplexResult r = simplex_minimize(objective, start, bounds, {1e-11, 6000, 0.05});
        if (!have || r.f < best.f) {
            best = r;
            have = true;
        }
    }

    FitResult out;
    out.gad = GadParams{std::clamp(best.x[0], 0.0, 1.0), std::clamp(best.x[1], gad_p_lo, 1.0)};
    out.u0 = detail::pole_gauge({best.x[2], best.x[3], 0.0});
    out.u1 = detail::pole_gauge({best.x[4], best.x[5], 0.0});
    out.gates.emplace(out.u0->matrix(), out.u1->matrix());
    out.objective_kind = ObjectiveKind::FidelitySum;
    out.objective_value = -best.f;
    out.per_oracle_fidelity = detail::report_fidelities(data, out.gad, out.gates);
    out.p_identifiable = out.gad.gamma >= 1e-3;
    return out;
}

/// Max-entry distance between unitaries after optimal global phase
/// alignment; the comparison used by round-trip tests.
inline double unitary_distance_up_to_phase(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("unitary_distance: dimension mismatch");
    const cplx t = (a.adjoint() * b).trace();
    const cplx phase = std::abs(t) > 1e-15 ? t / std::abs(t) : cplx{1.0};
    return (phase * a).max_abs_diff(b);
}

}  // namespace densim
