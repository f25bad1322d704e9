// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "densim/channels.hpp"
#include "densim/complex_matrix.hpp"
#include "densim/deutsch.hpp"
#include "densim/state.hpp"
#include "densim/tomography.hpp"

namespace densim::io {

using nlohmann::json;

inline void check_known_keys(const json& j, const std::vector<std::string>& known,
                             const std::string& what) {
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument(what + ": unknown field '" + key + "'");
    }
}

inline json complex_to_json(const cplx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline cplx complex_from_json(const json& j) {
    check_known_keys(j, {"re", "im"}, "complex number");
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

inline json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty())
        throw std::invalid_argument("matrix: expected a non-empty array of rows");
    const std::size_t dim = rows.size();
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (!rows[i].is_array() || rows[i].size() != dim)
            throw std::invalid_argument("matrix: ragged rows");
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = complex_from_json(rows[i][j]);
    }
    m.check_finite();
    return m;
}

// ---------------------------------------------------------------------------
// Counts records (one JSON object per line)
// ---------------------------------------------------------------------------

inline json counts_to_json(const CountsRecord& rec) {
    if (!rec.oracle) throw std::invalid_argument("counts record: oracle not set");
    json j{{"oracle", to_string(*rec.oracle)},
           {"basis", to_string(rec.basis)},
           {"shots", rec.shots},
           {"counts", json{{"0", rec.n0}, {"1", rec.n1}}}};
    if (rec.seed) j["seed"] = *rec.seed;
    if (rec.device) j["device"] = *rec.device;
    j["rng"] = std::string(Rng::algorithm_id);
    return j;
}

inline CountsRecord counts_from_json(const json& j) {
    check_known_keys(j, {"oracle", "basis", "shots", "counts", "seed", "device", "rng"},
                     "counts record");
    CountsRecord rec;
    rec.oracle = parse_oracle(j.at("oracle").get<std::string>());
    rec.basis = parse_basis(j.at("basis").get<std::string>());
    rec.shots = j.at("shots").get<std::uint64_t>();
    const json& c = j.at("counts");
    check_known_keys(c, {"0", "1"}, "counts");
    rec.n0 = c.at("0").get<std::uint64_t>();
    rec.n1 = c.at("1").get<std::uint64_t>();
    if (rec.n0 + rec.n1 != rec.shots)
        throw std::invalid_argument("counts record: counts do not sum to shots");
    if (j.contains("seed")) rec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("device")) rec.device = j.at("device").get<std::string>();
    return rec;
}

// ---------------------------------------------------------------------------
// State records
// ---------------------------------------------------------------------------

struct StateRecord {
    OracleKind oracle = OracleKind::F0;
    ComplexMatrix matrix{2};
    std::optional<std::uint64_t> shots;
    std::optional<std::uint64_t> seed;
    std::optional<bool> projected;
    std::optional<std::string> device;
};

inline json state_to_json(const StateRecord& rec) {
    json j{{"oracle", to_string(rec.oracle)},
           {"dim", rec.matrix.dim()},
           {"entries", matrix_to_json(rec.matrix)}};
    if (rec.shots) j["shots"] = *rec.shots;
    if (rec.seed) j["seed"] = *rec.seed;
    if (rec.projected) j["projected"] = *rec.projected;
    if (rec.device) j["device"] = *rec.device;
    return j;
}

inline StateRecord state_from_json(const json& j) {
    check_known_keys(j, {"oracle", "dim", "entries", "shots", "seed", "projected", "device"},
                     "state record");
    StateRecord rec;
    rec.oracle = parse_oracle(j.at("oracle").get<std::string>());
    rec.matrix = matrix_from_json(j.at("entries"));
    if (j.at("dim").get<std::size_t>() != rec.matrix.dim())
        throw std::invalid_argument("state record: dim does not match entries");
    if (j.contains("shots")) rec.shots = j.at("shots").get<std::uint64_t>();
    if (j.contains("seed")) rec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("projected")) rec.projected = j.at("projected").get<bool>();
    if (j.contains("device")) rec.device = j.at("device").get<std::string>();
    return rec;
}

// ---------------------------------------------------------------------------
// Expectation records (exact-tomography input)
// ---------------------------------------------------------------------------

struct ExpectationRecord {
    OracleKind oracle = OracleKind::F0;
    PauliExpectations e;
};

inline ExpectationRecord expectation_from_json(const json& j) {
    check_known_keys(j, {"oracle", "ex", "ey", "ez"}, "expectation record");
    return {parse_oracle(j.at("oracle").get<std::string>()),
            {j.at("ex").get<double>(), j.at("ey").get<double>(), j.at("ez").get<double>()}};
}

inline json expectation_to_json(const ExpectationRecord& rec) {
    return json{{"oracle", to_string(rec.oracle)},
                {"ex", rec.e.ex},
                {"ey", rec.e.ey},
                {"ez", rec.e.ez}};
}

// ---------------------------------------------------------------------------
// JSON-lines files
// ---------------------------------------------------------------------------

inline std::vector<json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<json> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

inline void write_jsonl(const std::string& path, const std::vector<json>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (const json& j : records) out << j.dump() << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// Bundled published reference values
// ---------------------------------------------------------------------------

struct ReferenceEntry {
    DensityMatrix state;
    int ideal_result;
    double probability;   // published success probability
    double weight;        // published isotropic weight
    double alignment;     // published alignment
    double fidelity;      // published model-vs-experiment fidelity
};

struct ReferenceData {
    std::map<OracleKind, ReferenceEntry> per_oracle;
    GadParams gad;
    ComplexMatrix g0_printed{2};
    ComplexMatrix g1_printed{2};
    std::uint64_t shots_per_basis = 8192;
    std::string device;

    const ReferenceEntry& at(OracleKind k) const { return per_oracle.at(k); }
};

inline ReferenceData load_reference(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference file '" + path + "'");
    json j = json::parse(in);

    ReferenceData ref;
    ref.device = j.at("device").get<std::string>();
    ref.shots_per_basis = j.at("shots_per_basis").get<std::uint64_t>();

    std::map<OracleKind, json> index_rows;
    for (const json& row : j.at("published_index"))
        index_rows.emplace(parse_oracle(row.at("oracle").get<std::string>()), row);

    for (const json& row : j.at("measured_states")) {
        const OracleKind k = parse_oracle(row.at("oracle").get<std::string>());
        const json& idx = index_rows.at(k);
        ReferenceEntry entry{
            DensityMatrix(matrix_from_json(row.at("matrix"))),
            row.at("ideal_result").get<int>(),
            row.at("probability").get<double>(),
            idx.at("weight").get<double>(),
            idx.at("alignment").get<double>(),
            idx.at("fidelity").get<double>(),
        };
        ref.per_oracle.emplace(k, std::move(entry));
    }
    if (ref.per_oracle.size() != 4)
        throw std::runtime_error("reference file: expected entries for all four oracles");

    const json& gf = j.at("published_gad_fit");
    ref.gad = GadParams{gf.at("gamma").get<double>(), gf.at("p").get<double>()};
    const json& mg = j.at("published_ma_gates");
    ref.g0_printed = matrix_from_json(mg.at("g0"));
    ref.g1_printed = matrix_from_json(mg.at("g1"));
    return ref;
}

}  // namespace densim::io
