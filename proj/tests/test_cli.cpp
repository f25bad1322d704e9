// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "densim/cli.hpp"
#include "testutil.hpp"

using namespace densim;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / fs::path("densim_cli_" + std::to_string(counter++))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static inline int counter = 0;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string ref_path = DENSIM_DEFAULT_REFERENCE;

}  // namespace

TEST_CASE("simulate with the identity model is exact on the Z basis") {
    TempDir tmp;
    cli::SimulateConfig cfg;
    cfg.out = tmp.file("counts.jsonl");
    cfg.seed = 7;
    cfg.shots = 8192;
    cfg.oracles = {"f0"};
    REQUIRE(cli::cmd_simulate(cfg) == 0);

    bool saw_z = false;
    for (const io::json& j : io::read_jsonl(cfg.out)) {
        const CountsRecord rec = io::counts_from_json(j);
        REQUIRE(rec.oracle == OracleKind::F0);
        if (rec.basis == Basis::Z) {
            saw_z = true;
            REQUIRE(rec.n0 == 8192);  // ideal f0 output is exactly |0>
        }
    }
    REQUIRE(saw_z);
}

TEST_CASE("simulate honors the damping model on the Z basis within binomial error") {
    TempDir tmp;
    cli::SimulateConfig cfg;
    cfg.out = tmp.file("counts.jsonl");
    cfg.gamma = 0.1947;
    cfg.p = 0.7761;
    cfg.seed = 21;
    cfg.shots = 65536;
    cfg.oracles = {"fId"};
    REQUIRE(cli::cmd_simulate(cfg) == 0);
    for (const io::json& j : io::read_jsonl(cfg.out)) {
        const CountsRecord rec = io::counts_from_json(j);
        if (rec.basis != Basis::Z) continue;
        const double frac1 = static_cast<double>(rec.n1) / static_cast<double>(rec.shots);
        // 1 - p*gamma = 0.84889, 3 sigma ~ 0.0042 at 65536 shots
        REQUIRE(frac1 == Approx(0.84889).margin(0.0045));
    }
}

TEST_CASE("simulate is byte-deterministic per seed") {
    TempDir tmp;
    cli::SimulateConfig cfg;
    cfg.out = tmp.file("a.jsonl");
    cfg.gamma = 0.1;
    cfg.p = 0.9;
    cfg.seed = 99;
    cfg.shots = 2048;
    REQUIRE(cli::cmd_simulate(cfg) == 0);
    cfg.out = tmp.file("b.jsonl");
    REQUIRE(cli::cmd_simulate(cfg) == 0);
    REQUIRE(slurp(tmp.file("a.jsonl")) == slurp(tmp.file("b.jsonl")));

    cfg.out = tmp.file("c.jsonl");
    cfg.seed = 100;
    REQUIRE(cli::cmd_simulate(cfg) == 0);
    REQUIRE(slurp(tmp.file("a.jsonl")) != slurp(tmp.file("c.jsonl")));
}

TEST_CASE("tomo reconstructs simulated states and reports missing bases") {
    TempDir tmp;
    cli::SimulateConfig sim;
    sim.out = tmp.file("counts.jsonl");
    sim.gamma = 0.1947;
    sim.p = 0.7761;
    sim.seed = 5;
    sim.shots = 8192;
    REQUIRE(cli::cmd_simulate(sim) == 0);

    cli::TomoConfig tomo;
    tomo.in = sim.out;
    tomo.out = tmp.file("states.jsonl");
    REQUIRE(cli::cmd_tomo(tomo) == 0);

    const auto records = io::read_jsonl(tomo.out);
    REQUIRE(records.size() == 4);
    for (const io::json& j : records) {
        const io::StateRecord rec = io::state_from_json(j);
        REQUIRE(rec.projected == true);
        REQUIRE(rec.shots == 8192);
        // Reconstruction should land near the model state (binomial error).
        const DensityMatrix model = cli::oracle_model_state(
            rec.oracle, std::nullopt, Interpretation::AsPrinted,
            GadParams{0.1947, 0.7761}, ModelOrder::MaThenGad);
        REQUIRE(densim::test::trace_distance(DensityMatrix(rec.matrix), model) < 0.05);
    }

    // Drop the Y-basis record for f0 and expect a named error.
    std::vector<io::json> pruned;
    for (const io::json& j : io::read_jsonl(sim.out)) {
        if (j.at("oracle") == "f0" && j.at("basis") == "Y") continue;
        pruned.push_back(j);
    }
    io::write_jsonl(tmp.file("pruned.jsonl"), pruned);
    cli::TomoConfig bad;
    bad.in = tmp.file("pruned.jsonl");
    bad.out = tmp.file("bad.jsonl");
    REQUIRE_THROWS_WITH(cli::cmd_tomo(bad), "basis Y absent for oracle f0");
}

TEST_CASE("tomo exact mode inverts expectations to the published matrix") {
    TempDir tmp;
    std::vector<io::json> recs = {io::expectation_to_json(
        io::ExpectationRecord{OracleKind::F0, {0.0924, 0.1328, 0.8982}})};
    io::write_jsonl(tmp.file("exact.jsonl"), recs);

    cli::TomoConfig tomo;
    tomo.exact = tmp.file("exact.jsonl");
    tomo.out = tmp.file("states.jsonl");
    REQUIRE(cli::cmd_tomo(tomo) == 0);
    const io::StateRecord rec = io::state_from_json(io::read_jsonl(tomo.out).at(0));
    const io::ReferenceData ref = io::load_reference(ref_path);
    REQUIRE(rec.matrix.max_abs_diff(ref.at(OracleKind::F0).state.matrix()) < 1e-12);
}

TEST_CASE("tomo requires exactly one input mode") {
    cli::TomoConfig tomo;
    tomo.out = "x.jsonl";
    REQUIRE_THROWS_AS(cli::cmd_tomo(tomo), std::invalid_argument);
}

TEST_CASE("index on the published matrices reproduces the published rows") {
    TempDir tmp;
    const io::ReferenceData ref = io::load_reference(ref_path);
    std::vector<io::json> states;
    for (OracleKind k : all_oracles())
        states.push_back(io::state_to_json(io::StateRecord{k, ref.at(k).state.matrix()}));
    io::write_jsonl(tmp.file("states.jsonl"), states);

    cli::IndexConfig cfg;
    cfg.in = tmp.file("states.jsonl");
    cfg.out = tmp.file("index.jsonl");
    cfg.format = "json";
    REQUIRE(cli::cmd_index(cfg) == 0);

    const auto rows = io::read_jsonl(tmp.file("index.jsonl"));
    REQUIRE(rows.size() == 4);
    for (const io::json& row : rows) {
        const OracleKind k = parse_oracle(row.at("oracle").get<std::string>());
        REQUIRE(row.at("weight").get<double>() == Approx(ref.at(k).weight).margin(5e-4));
        REQUIRE(row.at("alignment").get<double>() == Approx(ref.at(k).alignment).margin(5e-4));
        REQUIRE(row.at("ideal").get<int>() == ref.at(k).ideal_result);
    }
}

TEST_CASE("index on ideal outputs gives weight 0 and alignment 1") {
    TempDir tmp;
    std::vector<io::json> states;
    for (OracleKind k : all_oracles())
        states.push_back(io::state_to_json(
            io::StateRecord{k, run_ideal(k).output_state.matrix()}));
    io::write_jsonl(tmp.file("states.jsonl"), states);
    cli::IndexConfig cfg;
    cfg.in = tmp.file("states.jsonl");
    cfg.out = tmp.file("index.jsonl");
    cfg.format = "json";
    REQUIRE(cli::cmd_index(cfg) == 0);
    for (const io::json& row : io::read_jsonl(tmp.file("index.jsonl"))) {
        REQUIRE(row.at("weight").get<double>() == Approx(0.0).margin(1e-9));
        REQUIRE(row.at("alignment").get<double>() == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("index on the maximally mixed state uses the degenerate convention") {
    TempDir tmp;
    std::vector<io::json> states = {io::state_to_json(
        io::StateRecord{OracleKind::F0, DensityMatrix::maximally_mixed(2).matrix()})};
    io::write_jsonl(tmp.file("states.jsonl"), states);
    cli::IndexConfig cfg;
    cfg.in = tmp.file("states.jsonl");
    cfg.out = tmp.file("index.jsonl");
    cfg.format = "json";
    REQUIRE(cli::cmd_index(cfg) == 0);
    const io::json row = io::read_jsonl(tmp.file("index.jsonl")).at(0);
    REQUIRE(row.at("weight").get<double>() == 1.0);
    REQUIRE(row.at("alignment").get<double>() == 0.0);
}

TEST_CASE("fit command modes run end to end") {
    TempDir tmp;
    const io::ReferenceData ref = io::load_reference(ref_path);
    std::vector<io::json> states;
    for (OracleKind k : all_oracles())
        states.push_back(io::state_to_json(io::StateRecord{k, ref.at(k).state.matrix()}));
    const std::string states_path = tmp.file("states.jsonl");
    io::write_jsonl(states_path, states);

    cli::FitConfig gad;
    gad.in = states_path;
    gad.mode = "gad";
    gad.format = "json";
    gad.out = tmp.file("gad.json");
    gad.reference = ref_path;
    REQUIRE(cli::cmd_fit(gad) == 0);
    const io::json gad_doc = io::json::parse(slurp(*gad.out));
    REQUIRE(std::abs(gad_doc.at("gamma").get<double>() - 0.1947) < 0.08);
    REQUIRE(std::abs(gad_doc.at("p").get<double>() - 0.7761) < 0.08);
    REQUIRE(gad_doc.at("objective") == "fidelity-sum");

    cli::FitConfig ma;
    ma.in = states_path;
    ma.mode = "ma";
    ma.format = "json";
    ma.out = tmp.file("ma.json");
    ma.reference = ref_path;
    REQUIRE(cli::cmd_fit(ma) == 0);
    const io::json ma_doc = io::json::parse(slurp(*ma.out));
    for (const io::json& row : ma_doc.at("per_oracle")) {
        const OracleKind k = parse_oracle(row.at("oracle").get<std::string>());
        REQUIRE(row.at("fidelity").get<double>() ==
                Approx(ref.at(k).fidelity).margin(2e-3));
        REQUIRE(row.at("refit_fidelity").get<double>() >= ref.at(k).fidelity - 5e-4);
    }

    cli::FitConfig joint;
    joint.in = states_path;
    joint.mode = "joint";
    joint.format = "json";
    joint.out = tmp.file("joint.json");
    joint.reference = ref_path;
    REQUIRE(cli::cmd_fit(joint) == 0);
    const io::json joint_doc = io::json::parse(slurp(*joint.out));
    double mean = 0.0;
    for (const io::json& row : joint_doc.at("per_oracle"))
        mean += row.at("fidelity").get<double>() / 4.0;
    REQUIRE(mean >= 0.997);

    // Determinism: the machine-readable fit output is byte-identical.
    cli::FitConfig joint2 = joint;
    joint2.out = tmp.file("joint2.json");
    REQUIRE(cli::cmd_fit(joint2) == 0);
    REQUIRE(slurp(*joint.out) == slurp(*joint2.out));
}

TEST_CASE("report on the published matrices passes and ideal input fails") {
    TempDir tmp;
    cli::ReportConfig rep;
    rep.from_reference = true;
    rep.reference = ref_path;
    rep.format = "json";
    rep.out = tmp.file("report.json");
    REQUIRE(cli::cmd_report(rep) == 0);
    const io::json doc = io::json::parse(slurp(*rep.out));
    REQUIRE(doc.at("all_within_tolerance").get<bool>());
    for (const io::json& row : doc.at("rows")) {
        REQUIRE(row.at("probability").get<double>() ==
                Approx(row.at("probability_published").get<double>()).margin(1e-4));
    }

    // Ideal (noise-free) states are far from the published values.
    std::vector<io::json> states;
    for (OracleKind k : all_oracles())
        states.push_back(io::state_to_json(
            io::StateRecord{k, run_ideal(k).output_state.matrix()}));
    io::write_jsonl(tmp.file("ideal.jsonl"), states);
    cli::ReportConfig bad;
    bad.in = tmp.file("ideal.jsonl");
    bad.reference = ref_path;
    bad.format = "json";
    bad.out = tmp.file("bad.json");
    REQUIRE(cli::cmd_report(bad) == 1);
    const io::json bad_doc = io::json::parse(slurp(*bad.out));
    REQUIRE_FALSE(bad_doc.at("all_within_tolerance").get<bool>());
    for (const io::json& row : bad_doc.at("rows"))
        REQUIRE(row.at("probability").get<double>() == Approx(1.0).margin(1e-9));
}

TEST_CASE("argv entry point parses subcommands") {
    TempDir tmp;
    const std::string out = tmp.file("counts.jsonl");
    REQUIRE(cli::run({"simulate", "--out", out, "--seed", "3", "--shots", "64",
                      "--oracle", "f0"}) == 0);
    REQUIRE(io::read_jsonl(out).size() == 3);
    REQUIRE(cli::run({"nonsense"}) != 0);
    REQUIRE(cli::run({"tomo", "--out", tmp.file("x.jsonl")}) == 2);  // no input mode
}
