// SPDX-License-Identifier: MIT
#pragma once

#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "densim/deutsch.hpp"
#include "densim/fit.hpp"
#include "densim/io.hpp"
#include "densim/metrics.hpp"
#include "densim/tomography.hpp"

#ifndef DENSIM_DEFAULT_REFERENCE
#define DENSIM_DEFAULT_REFERENCE "data/reference_values.json"
#endif

namespace densim::cli {

inline std::string fmt(const char* format, ...) {
    va_list args;
    va_start(args, format);
    char buf[256];
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

inline void write_text(const std::optional<std::string>& path, const std::string& text) {
    if (path) {
        std::ofstream out(*path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + *path + "' for writing");
        out << text;
    } else {
        std::cout << text;
    }
}

// ---------------------------------------------------------------------------
// Shared model plumbing
// ---------------------------------------------------------------------------

/// Model state for one oracle: misalignment gate variant plus GAD applied
/// to the ideal pole state.
inline DensityMatrix oracle_model_state(OracleKind k, const std::optional<MaGates>& gates,
                                        Interpretation in, const GadParams& gad,
                                        ModelOrder order, GadForm form = GadForm::Standard) {
    ErrorModel model;
    model.gates = gates;
    model.interp0 = model.interp1 = in;
    model.gad = gad;
    model.form = form;
    model.order = order;
    return run_noisy(k, model).output_state;
}

struct InterpretationChoice {
    Interpretation interp = Interpretation::AsPrinted;
    double fidelity = 0.0;
    DensityMatrix model;
};

/// Pick the gate interpretation for one oracle: the fixed one if given,
/// otherwise the variant with the highest fidelity against `observed`.
inline InterpretationChoice choose_interpretation(OracleKind k, const DensityMatrix& observed,
                                                  const MaGates& gates, const GadParams& gad,
                                                  ModelOrder order,
                                                  std::optional<Interpretation> fixed) {
    std::optional<InterpretationChoice> best;
    for (Interpretation in : all_interpretations()) {
        if (fixed && in != *fixed) continue;
        DensityMatrix model = oracle_model_state(k, gates, in, gad, order);
        const double f = fidelity(model, observed);
        if (!best || f > best->fidelity) best = InterpretationChoice{in, f, std::move(model)};
    }
    return *best;
}

struct InterpretationPolicy {
    std::optional<Interpretation> fixed;  // empty = best per oracle
};

inline InterpretationPolicy parse_interpretation_policy(const std::string& s) {
    if (s == "best") return {};
    return {parse_interpretation(s)};
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateConfig {
    std::string out;
    double gamma = 0.0;
    double p = 1.0;
    bool use_ma = false;
    std::string interpretation = "best";
    std::string order = "ma-then-gad";
    bool literal_e1 = false;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 1;
    std::vector<std::string> oracles;  // empty = all four
    std::string reference = DENSIM_DEFAULT_REFERENCE;
    std::optional<std::string> device;
};

inline int cmd_simulate(const SimulateConfig& cfg) {
    const GadParams gad{cfg.gamma, cfg.p};
    const ModelOrder order = parse_order(cfg.order);
    const InterpretationPolicy policy = parse_interpretation_policy(cfg.interpretation);

    std::vector<OracleKind> kinds;
    if (cfg.oracles.empty())
        kinds.assign(all_oracles().begin(), all_oracles().end());
    else
        for (const std::string& s : cfg.oracles) kinds.push_back(parse_oracle(s));

    std::optional<MaGates> gates;
    std::optional<io::ReferenceData> ref;
    if (cfg.use_ma) {
        ref = io::load_reference(cfg.reference);
        gates.emplace(ref->g0_printed, ref->g1_printed);
    }

    std::vector<io::json> records;
    for (std::size_t oi = 0; oi < kinds.size(); ++oi) {
        const OracleKind k = kinds[oi];
        DensityMatrix state = [&] {
            if (!gates)
                return oracle_model_state(k, std::nullopt, Interpretation::AsPrinted, gad, order,
                                          cfg.literal_e1 ? GadForm::PublishedLiteral
                                                                : GadForm::Standard);
            const auto choice = choose_interpretation(k, ref->at(k).state, *gates, gad, order,
                                                      policy.fixed);
            return choice.model;
        }();
        for (std::size_t bi = 0; bi < all_bases().size(); ++bi) {
            const Basis b = all_bases()[bi];
            CountsRecord rec = sample_counts(state, b, cfg.shots,
                                             Rng::derive(cfg.seed, oi * 3 + bi));
            rec.oracle = k;
            rec.device = cfg.device;
            records.push_back(io::counts_to_json(rec));
        }
    }
    io::write_jsonl(cfg.out, records);
    return 0;
}

// ---------------------------------------------------------------------------
// tomo
// ---------------------------------------------------------------------------

struct TomoConfig {
    std::optional<std::string> in;     // counts JSONL
    std::optional<std::string> exact;  // expectation JSONL (infinite-precision mode)
    std::string out;
};

inline int cmd_tomo(const TomoConfig& cfg) {
    if (cfg.in.has_value() == cfg.exact.has_value())
        throw std::invalid_argument("tomo: exactly one of --in / --exact is required");

    std::vector<io::json> out_records;
    if (cfg.exact) {
        for (const io::json& j : io::read_jsonl(*cfg.exact)) {
            const io::ExpectationRecord rec = io::expectation_from_json(j);
            io::StateRecord sr;
            sr.oracle = rec.oracle;
            sr.matrix = project_to_density(reconstruct(rec.e)).matrix();
            sr.projected = true;
            out_records.push_back(io::state_to_json(sr));
        }
    } else {
        std::map<OracleKind, std::map<Basis, CountsRecord>> cells;
        for (const io::json& j : io::read_jsonl(*cfg.in)) {
            const CountsRecord rec = io::counts_from_json(j);
            auto [it, inserted] = cells[*rec.oracle].emplace(rec.basis, rec);
            if (!inserted)
                throw std::invalid_argument(fmt("duplicate basis %s for oracle %s",
                                                to_string(rec.basis), to_string(*rec.oracle)));
        }
        for (OracleKind k : all_oracles()) {
            if (!cells.count(k)) continue;
            auto& per_basis = cells.at(k);
            for (Basis b : all_bases())
                if (!per_basis.count(b))
                    throw std::invalid_argument(fmt("basis %s absent for oracle %s",
                                                    to_string(b), to_string(k)));
            const CountsRecord& cx = per_basis.at(Basis::X);
            const CountsRecord& cy = per_basis.at(Basis::Y);
            const CountsRecord& cz = per_basis.at(Basis::Z);
            io::StateRecord sr;
            sr.oracle = k;
            sr.matrix = estimate_state(cx, cy, cz).matrix();
            if (cx.shots == cy.shots && cy.shots == cz.shots) sr.shots = cz.shots;
            if (cx.device == cy.device && cy.device == cz.device) sr.device = cz.device;
            sr.projected = true;
            out_records.push_back(io::state_to_json(sr));
        }
    }
    io::write_jsonl(cfg.out, out_records);
    return 0;
}

// ---------------------------------------------------------------------------
// index
// ---------------------------------------------------------------------------

struct IndexConfig {
    std::string in;
    std::optional<std::string> out;
    std::string format = "human";
};

inline int cmd_index(const IndexConfig& cfg) {
    std::ostringstream human;
    std::vector<io::json> rows;
    human << "oracle  ideal  weight  alignment\n";
    for (const io::json& j : io::read_jsonl(cfg.in)) {
        const io::StateRecord rec = io::state_from_json(j);
        const int bit = ideal_bit(rec.oracle);
        const IsotropicIndex idx =
            isotropic_index(DensityMatrix(rec.matrix), PureState::basis(1, bit));
        human << fmt("%-6s  %5d  %6.4f  %9.4f\n", to_string(rec.oracle), bit, idx.weight,
                     idx.alignment);
        rows.push_back(io::json{{"oracle", to_string(rec.oracle)},
                                {"ideal", bit},
                                {"weight", idx.weight},
                                {"alignment", idx.alignment}});
    }
    if (cfg.format == "json") {
        std::string text;
        for (const io::json& r : rows) text += r.dump() + "\n";
        write_text(cfg.out, text);
    } else {
        write_text(cfg.out, human.str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitConfig {
    std::string in;
    std::string mode = "joint";  // gad | ma | joint
    std::string objective = "fidelity";
    std::string interpretation = "best";
    std::string order = "ma-then-gad";
    std::string format = "human";
    std::string reference = DENSIM_DEFAULT_REFERENCE;
    std::optional<std::string> out;
};

inline FitDataset load_dataset(const std::string& path) {
    FitDataset data;
    for (const io::json& j : io::read_jsonl(path)) {
        const io::StateRecord rec = io::state_from_json(j);
        data.emplace_back(rec.oracle, DensityMatrix(rec.matrix));
    }
    return data;
}

inline io::json unitary_params_json(const UnitaryParams& u) {
    return io::json{{"theta", u.theta}, {"phi", u.phi}, {"lambda", u.lambda}};
}

inline int cmd_fit(const FitConfig& cfg) {
    const FitDataset data = load_dataset(cfg.in);
    const ModelOrder order = parse_order(cfg.order);
    const InterpretationPolicy policy = parse_interpretation_policy(cfg.interpretation);

    io::json doc;
    std::ostringstream human;
    doc["mode"] = cfg.mode;

    if (cfg.mode == "gad") {
        const FitResult r = fit_gad(data, parse_objective(cfg.objective));
        doc["objective"] = to_string(r.objective_kind);
        doc["objective_value"] = r.objective_value;
        doc["gamma"] = r.gad.gamma;
        doc["p"] = r.gad.p;
        doc["p_identifiable"] = r.p_identifiable;
        human << fmt("GAD fit (%s): gamma = %.6f, p = %.6f%s\n", to_string(r.objective_kind),
                     r.gad.gamma, r.gad.p,
                     r.p_identifiable ? "" : "  [p unidentifiable: gamma ~ 0, objective flat]");
        io::json rows = io::json::array();
        for (std::size_t i = 0; i < data.size(); ++i) {
            rows.push_back(io::json{{"oracle", to_string(data[i].oracle)},
                                    {"fidelity", r.per_oracle_fidelity[i]}});
            human << fmt("  %-5s fidelity %.6f\n", to_string(data[i].oracle),
                         r.per_oracle_fidelity[i]);
        }
        doc["per_oracle"] = rows;
    } else if (cfg.mode == "ma") {
        const io::ReferenceData ref = io::load_reference(cfg.reference);
        const MaGates gates(ref.g0_printed, ref.g1_printed);
        doc["objective"] = "fidelity-sum";
        doc["gamma"] = ref.gad.gamma;
        doc["p"] = ref.gad.p;
        doc["order"] = to_string(order);
        human << fmt("MA model with published gates (re-unitarized), gamma = %.4f, p = %.4f, %s\n",
                     ref.gad.gamma, ref.gad.p, to_string(order));
        io::json rows = io::json::array();
        for (const FitEntry& e : data) {
            const auto choice =
                choose_interpretation(e.oracle, e.observed, gates, ref.gad, order, policy.fixed);
            const auto [u, refit_f] = fit_unitary(e.observed, e.bit, ref.gad);
            rows.push_back(io::json{{"oracle", to_string(e.oracle)},
                                    {"interpretation", to_string(choice.interp)},
                                    {"fidelity", choice.fidelity},
                                    {"refit", unitary_params_json(u)},
                                    {"refit_fidelity", refit_f}});
            human << fmt("  %-5s interp=%-10s fidelity %.6f | refit gate fidelity %.6f "
                         "(theta=%.4f phi=%.4f)\n",
                         to_string(e.oracle), to_string(choice.interp), choice.fidelity, refit_f,
                         u.theta, u.phi);
        }
        doc["per_oracle"] = rows;
        doc["g0_reunitarized"] = io::matrix_to_json(gates.g0());
        doc["g1_reunitarized"] = io::matrix_to_json(gates.g1());
    } else if (cfg.mode == "joint") {
        const FitResult r = fit_joint(data);
        doc["objective"] = to_string(r.objective_kind);
        doc["objective_value"] = r.objective_value;
        doc["gamma"] = r.gad.gamma;
        doc["p"] = r.gad.p;
        doc["p_identifiable"] = r.p_identifiable;
        doc["u0"] = unitary_params_json(*r.u0);
        doc["u1"] = unitary_params_json(*r.u1);
        doc["g0"] = io::matrix_to_json(r.gates->g0());
        doc["g1"] = io::matrix_to_json(r.gates->g1());
        human << fmt("joint fit: gamma = %.6f, p = %.6f, mean fidelity = %.6f\n", r.gad.gamma,
                     r.gad.p, r.objective_value / static_cast<double>(data.size()));
        human << fmt("  gate for result 0: theta=%.4f phi=%.4f\n", r.u0->theta, r.u0->phi);
        human << fmt("  gate for result 1: theta=%.4f phi=%.4f\n", r.u1->theta, r.u1->phi);
        io::json rows = io::json::array();
        for (std::size_t i = 0; i < data.size(); ++i) {
            rows.push_back(io::json{{"oracle", to_string(data[i].oracle)},
                                    {"fidelity", r.per_oracle_fidelity[i]}});
            human << fmt("  %-5s fidelity %.6f\n", to_string(data[i].oracle),
                         r.per_oracle_fidelity[i]);
        }
        doc["per_oracle"] = rows;
    } else {
        throw std::invalid_argument("fit: unknown mode '" + cfg.mode + "'");
    }

    write_text(cfg.out, cfg.format == "json" ? doc.dump() + "\n" : human.str());
    return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportConfig {
    std::optional<std::string> in;  // states JSONL; absent = published matrices
    bool from_reference = false;
    std::string reference = DENSIM_DEFAULT_REFERENCE;
    std::string interpretation = "best";
    std::string order = "ma-then-gad";
    std::string format = "human";
    std::optional<std::string> out;
    double tol_prob = 1e-4;
    double tol_index = 5e-4;
    double tol_fidelity = 2e-3;
};

inline int cmd_report(const ReportConfig& cfg) {
    if (cfg.in.has_value() == cfg.from_reference)
        throw std::invalid_argument("report: exactly one of --in / --from-reference is required");
    const io::ReferenceData ref = io::load_reference(cfg.reference);
    const ModelOrder order = parse_order(cfg.order);
    const InterpretationPolicy policy = parse_interpretation_policy(cfg.interpretation);
    const MaGates gates(ref.g0_printed, ref.g1_printed);

    std::map<OracleKind, DensityMatrix> states;
    if (cfg.in) {
        for (const io::json& j : io::read_jsonl(*cfg.in)) {
            const io::StateRecord rec = io::state_from_json(j);
            states.emplace(rec.oracle, DensityMatrix(rec.matrix));
        }
    } else {
        for (OracleKind k : all_oracles()) states.emplace(k, ref.at(k).state);
    }

    bool all_ok = true;
    std::ostringstream human;
    io::json rows = io::json::array();
    human << "oracle ideal | prob    publ    delta   | weight  publ    delta   | "
             "align   publ    delta   | fidelity publ    delta    interp\n";
    for (OracleKind k : all_oracles()) {
        if (!states.count(k)) continue;
        const DensityMatrix& obs = states.at(k);
        const io::ReferenceEntry& pub = ref.at(k);
        const int bit = ideal_bit(k);

        const double prob = measure_probs(obs, computational_projectors(2))[bit];
        const IsotropicIndex idx = isotropic_index(obs, PureState::basis(1, bit));
        const auto choice = choose_interpretation(k, obs, gates, ref.gad, order, policy.fixed);

        const double d_prob = std::abs(prob - pub.probability);
        const double d_w = std::abs(idx.weight - pub.weight);
        const double d_a = std::abs(idx.alignment - pub.alignment);
        const double d_f = std::abs(choice.fidelity - pub.fidelity);
        const bool ok = d_prob <= cfg.tol_prob && d_w <= cfg.tol_index && d_a <= cfg.tol_index &&
                        d_f <= cfg.tol_fidelity;
        all_ok = all_ok && ok;

        human << fmt("%-6s %5d | %.4f  %.4f  %.1e | %.4f  %.4f  %.1e | %.4f  %.4f  %.1e | "
                     "%.4f   %.4f  %.1e  %s%s\n",
                     to_string(k), bit, prob, pub.probability, d_prob, idx.weight, pub.weight, d_w,
                     idx.alignment, pub.alignment, d_a, choice.fidelity, pub.fidelity, d_f,
                     to_string(choice.interp), ok ? "" : "  <-- OVER TOLERANCE");
        rows.push_back(io::json{{"oracle", to_string(k)},
                                {"ideal", bit},
                                {"probability", prob},
                                {"probability_published", pub.probability},
                                {"weight", idx.weight},
                                {"weight_published", pub.weight},
                                {"alignment", idx.alignment},
                                {"alignment_published", pub.alignment},
                                {"model_fidelity", choice.fidelity},
                                {"fidelity_published", pub.fidelity},
                                {"interpretation", to_string(choice.interp)},
                                {"within_tolerance", ok}});
    }
    human << (all_ok ? "status: all deltas within tolerance\n"
                     : "status: TOLERANCE EXCEEDED\n");
    io::json doc{{"rows", rows},
                 {"gamma", ref.gad.gamma},
                 {"p", ref.gad.p},
                 {"order", to_string(order)},
                 {"all_within_tolerance", all_ok}};
    write_text(cfg.out, cfg.format == "json" ? doc.dump() + "\n" : human.str());
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// argument parsing
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv) {
    CLI::App app{"density-matrix simulation and noise characterization for the "
                 "one-bit oracle-discrimination (Deutsch) experiment"};
    app.require_subcommand(1);

    SimulateConfig sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "run the noisy pipeline and write sampled counts per oracle and basis");
    simulate->add_option("--out", sim.out, "output counts JSONL")->required();
    simulate->add_option("--gamma", sim.gamma, "GAD damping probability");
    simulate->add_option("--p", sim.p, "GAD thermal parameter, in (1/2, 1]");
    simulate->add_flag("--ma", sim.use_ma, "apply the published misalignment gates");
    simulate->add_option("--interpretation", sim.interpretation,
                         "gate interpretation: best|as-printed|adjoint|transpose|conjugate");
    simulate->add_option("--order", sim.order, "ma-then-gad | gad-then-ma");
    simulate->add_flag("--literal-e1", sim.literal_e1,
                       "use the misprinted E1 form of the damping channel");
    simulate->add_option("--shots", sim.shots, "shots per (oracle, basis) cell");
    simulate->add_option("--seed", sim.seed, "base RNG seed");
    simulate->add_option("--oracle", sim.oracles, "restrict to specific oracles (repeatable)");
    simulate->add_option("--reference", sim.reference, "published reference values file");
    std::string device;
    simulate->add_option("--device", device, "free-text device tag for the records");

    TomoConfig tomo;
    CLI::App* tomo_cmd =
        app.add_subcommand("tomo", "reconstruct density matrices from counts (or expectations)");
    std::string tomo_in, tomo_exact;
    tomo_cmd->add_option("--in", tomo_in, "counts JSONL");
    tomo_cmd->add_option("--exact", tomo_exact, "expectation JSONL (infinite-precision mode)");
    tomo_cmd->add_option("--out", tomo.out, "output states JSONL")->required();

    IndexConfig index;
    CLI::App* index_cmd =
        app.add_subcommand("index", "isotropic weight and alignment per oracle");
    index_cmd->add_option("--in", index.in, "states JSONL")->required();
    std::string index_out;
    index_cmd->add_option("--out", index_out, "output path (default stdout)");
    index_cmd->add_option("--format", index.format, "human | json");

    FitConfig fit;
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit error-model parameters to states");
    fit_cmd->add_option("--in", fit.in, "states JSONL")->required();
    fit_cmd->add_option("--mode", fit.mode, "gad | ma | joint")->required();
    fit_cmd->add_option("--objective", fit.objective, "fidelity | frobenius");
    fit_cmd->add_option("--interpretation", fit.interpretation, "gate interpretation policy");
    fit_cmd->add_option("--order", fit.order, "ma-then-gad | gad-then-ma");
    fit_cmd->add_option("--format", fit.format, "human | json");
    fit_cmd->add_option("--reference", fit.reference, "published reference values file");
    std::string fit_out;
    fit_cmd->add_option("--out", fit_out, "output path (default stdout)");

    ReportConfig report;
    CLI::App* report_cmd = app.add_subcommand(
        "report", "side-by-side comparison with the published values; nonzero exit on excess deltas");
    std::string report_in, report_out;
    report_cmd->add_option("--in", report_in, "states JSONL");
    report_cmd->add_flag("--from-reference", report.from_reference,
                         "use the published measured matrices as input");
    report_cmd->add_option("--reference", report.reference, "published reference values file");
    report_cmd->add_option("--interpretation", report.interpretation, "gate interpretation policy");
    report_cmd->add_option("--order", report.order, "ma-then-gad | gad-then-ma");
    report_cmd->add_option("--format", report.format, "human | json");
    report_cmd->add_option("--out", report_out, "output path (default stdout)");
    report_cmd->add_option("--tol-prob", report.tol_prob, "probability delta tolerance");
    report_cmd->add_option("--tol-index", report.tol_index, "weight/alignment delta tolerance");
    report_cmd->add_option("--tol-fidelity", report.tol_fidelity, "fidelity delta tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*simulate) {
            if (!device.empty()) sim.device = device;
            return cmd_simulate(sim);
        }
        if (*tomo_cmd) {
            if (!tomo_in.empty()) tomo.in = tomo_in;
            if (!tomo_exact.empty()) tomo.exact = tomo_exact;
            return cmd_tomo(tomo);
        }
        if (*index_cmd) {
            if (!index_out.empty()) index.out = index_out;
            return cmd_index(index);
        }
        if (*fit_cmd) {
            if (!fit_out.empty()) fit.out = fit_out;
            return cmd_fit(fit);
        }
        if (*report_cmd) {
            if (!report_in.empty()) report.in = report_in;
            if (!report_out.empty()) report.out = report_out;
            return cmd_report(report);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

inline int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("densim");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace densim::cli
