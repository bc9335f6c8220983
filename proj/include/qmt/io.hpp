#pragma once

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qmt/chowliu.hpp"
#include "qmt/density.hpp"
#include "qmt/marginal_set.hpp"
#include "qmt/markov_tree.hpp"
#include "qmt/petz.hpp"

namespace qmt {

using Json = nlohmann::json;

/// Operator files:
///   {"labels": [["A", 2], ...], "matrix_re": [[...]], "matrix_im": [[...]]}
/// nlohmann emits shortest-round-trip decimals, so save/load is bit-stable.
inline Json operator_to_json(const LabeledOperator& op) {
    Json j;
    j["labels"] = Json::array();
    for (const auto& p : op.layout.parts()) j["labels"].push_back({p.label, p.dim});
    Json re = Json::array(), im = Json::array();
    for (long r = 0; r < op.mat.rows(); ++r) {
        Json re_row = Json::array(), im_row = Json::array();
        for (long c = 0; c < op.mat.cols(); ++c) {
            re_row.push_back(op.mat(r, c).real());
            im_row.push_back(op.mat(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    j["matrix_re"] = std::move(re);
    j["matrix_im"] = std::move(im);
    return j;
}

inline Json operator_to_json(const DensityOperator& op) { return operator_to_json(op.labeled()); }

inline LabeledOperator labeled_operator_from_json(const Json& j) {
    if (!j.contains("labels") || !j["labels"].is_array() || j["labels"].empty()) {
        throw std::invalid_argument("operator JSON: field 'labels' missing or not a list");
    }
    std::vector<Subsystem> parts;
    for (const auto& entry : j["labels"]) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
            !entry[1].is_number_integer()) {
            throw std::invalid_argument("operator JSON: 'labels' entries must be [name, dim]");
        }
        parts.push_back({entry[0].get<std::string>(), entry[1].get<long>()});
    }
    SystemLayout layout(parts);

    const long d = layout.total_dim();
    for (const char* field : {"matrix_re", "matrix_im"}) {
        if (!j.contains(field) || !j[field].is_array() ||
            static_cast<long>(j[field].size()) != d) {
            throw std::invalid_argument(std::string("operator JSON: field '") + field +
                                        "' missing or of wrong row count");
        }
    }
    Matrix m(d, d);
    for (long r = 0; r < d; ++r) {
        const auto& re_row = j["matrix_re"][static_cast<size_t>(r)];
        const auto& im_row = j["matrix_im"][static_cast<size_t>(r)];
        if (static_cast<long>(re_row.size()) != d || static_cast<long>(im_row.size()) != d) {
            throw std::invalid_argument("operator JSON: row " + std::to_string(r) +
                                        " has the wrong number of columns");
        }
        for (long c = 0; c < d; ++c) {
            m(r, c) = Complex(re_row[static_cast<size_t>(c)].get<double>(),
                              im_row[static_cast<size_t>(c)].get<double>());
        }
    }
    return {std::move(m), std::move(layout)};
}

inline DensityOperator density_from_json(const Json& j, ValidationTols tols = {}) {
    LabeledOperator op = labeled_operator_from_json(j);
    return make_density(std::move(op.mat), std::move(op.layout), tols);
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "' for reading");
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("parse error in '" + path + "': " + e.what());
    }
    return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

inline DensityOperator load_operator(const std::string& path, ValidationTols tols = {}) {
    try {
        return density_from_json(read_json_file(path), tols);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(e.what()) + " [file " + path + "]");
    }
}

inline void save_operator(const DensityOperator& op, const std::string& path) {
    write_json_file(path, operator_to_json(op));
}

/// Marginal-set files:
///   {"layout": [["X1", 2], ...],
///    "pairs": [{"labels": ["X1", "X2"], "operator": {...}}, ...]}
inline Json marginal_set_to_json(const MarginalSet& set) {
    Json j;
    j["layout"] = Json::array();
    for (const auto& p : set.layout.parts()) j["layout"].push_back({p.label, p.dim});
    j["pairs"] = Json::array();
    for (const auto& [key, op] : set.pairs) {
        Json entry;
        entry["labels"] = {key.first, key.second};
        entry["operator"] = operator_to_json(op);
        j["pairs"].push_back(std::move(entry));
    }
    return j;
}

inline MarginalSet marginal_set_from_json(const Json& j, double consistency_tol = 1e-8,
                                          ValidationTols tols = {}) {
    if (!j.contains("layout") || !j["layout"].is_array()) {
        throw std::invalid_argument("marginal-set JSON: field 'layout' missing");
    }
    std::vector<Subsystem> parts;
    for (const auto& entry : j["layout"]) {
        parts.push_back({entry[0].get<std::string>(), entry[1].get<long>()});
    }
    if (!j.contains("pairs") || !j["pairs"].is_array()) {
        throw std::invalid_argument("marginal-set JSON: field 'pairs' missing");
    }
    std::vector<DensityOperator> ops;
    for (const auto& entry : j["pairs"]) {
        if (!entry.contains("operator")) {
            throw std::invalid_argument("marginal-set JSON: pair entry without 'operator'");
        }
        ops.push_back(density_from_json(entry["operator"], tols));
    }
    return make_marginal_set(SystemLayout(parts), std::move(ops), consistency_tol);
}

inline MarginalSet load_marginal_set(const std::string& path, double consistency_tol = 1e-8) {
    try {
        return marginal_set_from_json(read_json_file(path), consistency_tol);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(e.what()) + " [file " + path + "]");
    }
}

/// Graph files: {"nodes": ["A", ...], "edges": [["A", "B"], ...]}
inline Json graph_to_json(const AssociatedGraph& g) {
    Json j;
    j["nodes"] = g.nodes;
    j["edges"] = Json::array();
    for (const auto& [a, b] : g.edges) j["edges"].push_back({a, b});
    return j;
}

inline AssociatedGraph graph_from_json(const Json& j) {
    if (!j.contains("nodes") || !j.contains("edges")) {
        throw std::invalid_argument("graph JSON: fields 'nodes' and 'edges' are required");
    }
    std::vector<std::string> nodes = j["nodes"].get<std::vector<std::string>>();
    std::vector<Edge> edges;
    for (const auto& e : j["edges"]) {
        edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
    }
    return make_graph(std::move(nodes), std::move(edges));
}

inline AssociatedGraph load_graph(const std::string& path) {
    try {
        return graph_from_json(read_json_file(path));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(e.what()) + " [file " + path + "]");
    }
}

/// Chain files: {"rho_ab": <operator>, "rho_bc": <operator>}; the shared
/// label is inferred from the layouts.
inline ThreeChainMarginals load_chain(const std::string& path, double tolerance,
                                      ValidationTols tols = {}) {
    const Json j = read_json_file(path);
    if (!j.contains("rho_ab") || !j.contains("rho_bc")) {
        throw std::invalid_argument("chain JSON: fields 'rho_ab' and 'rho_bc' are required [file " +
                                    path + "]");
    }
    return make_three_chain(density_from_json(j["rho_ab"], tols),
                            density_from_json(j["rho_bc"], tols), tolerance);
}

inline Json qmc_verdict_to_json(const QmcVerdict& v) {
    Json j;
    j["exists"] = v.exists;
    j["normality_residual"] = v.normality_residual;
    j["b_marginal_distance"] = v.b_marginal_distance;
    j["trace_residual"] = v.trace_residual;
    j["rank_deficient"] = v.rank_deficient;
    if (v.reconstruction) {
        j["cmi_of_reconstruction"] = clamp_cmi(v.cmi_of_reconstruction);
        j["marginal_ab_distance"] = v.marginal_ab_distance;
        j["marginal_bc_distance"] = v.marginal_bc_distance;
        j["reconstruction_entropy_bits"] = von_neumann_entropy(*v.reconstruction);
    }
    return j;
}

inline Json reconstruction_to_json(const TreeReconstruction& rec) {
    Json j;
    j["closed_form_entropy_bits"] = rec.closed_form_entropy_bits;
    j["order"] = rec.order.order;
    j["residuals"] = rec.residuals;
    return j;
}

/// FNV-1a 64-bit content digest; identifies inputs in reports.
inline std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "' for digesting");
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a_digest(ss.str());
}

/// Machine-readable run summary. Re-running a command on identical inputs
/// and seed reproduces every field except wall_time_ms.
struct RunReport {
    std::string command;
    Json inputs = Json::object();      // path -> digest
    Json tolerances = Json::object();
    Json results = Json::object();
    Json residuals = Json::object();
    std::optional<std::uint64_t> seed;
    long wall_time_ms = 0;

    void add_input(const std::string& path) { inputs[path] = file_digest(path); }

    Json to_json() const {
        Json j;
        j["command"] = command;
        j["inputs"] = inputs;
        j["tolerances"] = tolerances;
        j["results"] = results;
        j["residuals"] = residuals;
        if (seed) j["seed"] = *seed;
        j["wall_time_ms"] = wall_time_ms;
        return j;
    }
};

}  // namespace qmt
