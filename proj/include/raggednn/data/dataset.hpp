// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "raggednn/graph.hpp"
#include "raggednn/nn/schnet.hpp"
#include "raggednn/task.hpp"
#include "raggednn/random.hpp"

namespace raggednn {

/// One stored graph: features, connectivity, and exactly one supervision
/// field (targets, label, or node_labels).
struct GraphRecord {
    std::string id;
    Matrix node_features;                       // (N, F_n)
    EdgeList edge_index;                        // graph-local (receiver, sender)
    std::optional<Matrix> edge_features;        // (M, F_e)
    std::optional<Matrix> positions;            // (N, 3)
    std::optional<std::vector<double>> state;   // (F_u)
    std::optional<std::vector<double>> targets; // graph regression
    std::optional<int> label;                   // graph classification
    std::optional<std::vector<int>> node_labels;

    Index num_nodes() const { return node_features.rows(); }
    Index num_edges() const { return static_cast<Index>(edge_index.size()); }

    void validate() const {
        const Index n = num_nodes();
        for (const Edge& e : edge_index)
            if (e.receiver < 0 || e.receiver >= n || e.sender < 0 || e.sender >= n)
                throw ValidationError("edge index " +
                                      std::to_string(std::max(e.receiver, e.sender)) + " >= " +
                                      std::to_string(n) + " nodes");
        if (edge_features && edge_features->rows() != num_edges())
            throw ValidationError("edge_features rows != edge count");
        if (positions && (positions->rows() != n || positions->cols() != 3))
            throw ValidationError("positions must be (N,3)");
        if (node_labels && static_cast<Index>(node_labels->size()) != n)
            throw ValidationError("node_labels length != node count");
        const int supervision = (targets ? 1 : 0) + (label ? 1 : 0) + (node_labels ? 1 : 0);
        if (supervision != 1)
            throw ValidationError("exactly one of targets/label/node_labels required, got " +
                                  std::to_string(supervision));
    }
};

/// Dataset-level description inferred from the records (plus target
/// names supplied by the run configuration).
struct DatasetSpec {
    Task task = Task::GraphRegression;
    std::vector<std::string> target_names;  // regression; defaults t0..tK-1
    Index num_classes = 0;
    Index num_targets = 0;
    Index node_width = 0;
    Index edge_width = 0;   // 0 = records carry no edge features
    Index state_width = 0;  // 0 = no state
    bool has_positions = false;
};

namespace detail {

inline Matrix matrix_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array of rows");
    const Index rows = static_cast<Index>(j.size());
    Index cols = 0;
    if (rows > 0) {
        if (!j[0].is_array()) throw ValidationError(std::string(what) + ": rows must be arrays");
        cols = static_cast<Index>(j[0].size());
    }
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        if (static_cast<Index>(j[static_cast<std::size_t>(r)].size()) != cols)
            throw ValidationError(std::string(what) + ": ragged row widths");
        for (Index c = 0; c < cols; ++c)
            m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

/// Parse one JSONL line into a record. Keys are fixed: id, nodes, edges,
/// and optionally edge_features / positions / state plus exactly one of
/// targets / label / node_labels.
inline GraphRecord graph_record_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("graph record: expected a JSON object");
    GraphRecord rec;
    for (const auto& [key, value] : j.items()) {
        if (key == "id")
            rec.id = value.get<std::string>();
        else if (key == "nodes")
            rec.node_features = detail::matrix_from_json(value, "nodes");
        else if (key == "edges") {
            if (!value.is_array()) throw ValidationError("edges: expected an array");
            for (const auto& pair : value) {
                if (!pair.is_array() || pair.size() != 2)
                    throw ValidationError("edges: entries must be [receiver, sender]");
                rec.edge_index.push_back({pair[0].get<Index>(), pair[1].get<Index>()});
            }
        } else if (key == "edge_features")
            rec.edge_features = detail::matrix_from_json(value, "edge_features");
        else if (key == "positions")
            rec.positions = detail::matrix_from_json(value, "positions");
        else if (key == "state")
            rec.state = value.get<std::vector<double>>();
        else if (key == "targets")
            rec.targets = value.get<std::vector<double>>();
        else if (key == "label")
            rec.label = value.get<int>();
        else if (key == "node_labels")
            rec.node_labels = value.get<std::vector<int>>();
        else
            throw ValidationError("unknown key '" + key + "'");
    }
    rec.validate();
    return rec;
}

inline nlohmann::json graph_record_to_json(const GraphRecord& rec) {
    nlohmann::json j;
    j["id"] = rec.id;
    j["nodes"] = detail::matrix_to_json(rec.node_features);
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : rec.edge_index) edges.push_back({e.receiver, e.sender});
    j["edges"] = std::move(edges);
    if (rec.edge_features) j["edge_features"] = detail::matrix_to_json(*rec.edge_features);
    if (rec.positions) j["positions"] = detail::matrix_to_json(*rec.positions);
    if (rec.state) j["state"] = *rec.state;
    if (rec.targets) j["targets"] = *rec.targets;
    if (rec.label) j["label"] = *rec.label;
    if (rec.node_labels) j["node_labels"] = *rec.node_labels;
    return j;
}

/// Infer the dataset spec and cross-check every record against it.
/// `line offsets` index error messages when called from the loader.
inline DatasetSpec dataset_spec_from_records(const std::vector<GraphRecord>& records) {
    if (records.empty()) throw ValidationError("dataset: no graphs");
    DatasetSpec spec;
    const GraphRecord& first = records.front();
    spec.task = first.targets ? Task::GraphRegression
                              : (first.label ? Task::GraphClassification : Task::NodeClassification);
    spec.node_width = first.node_features.cols();
    spec.edge_width = first.edge_features ? first.edge_features->cols() : 0;
    spec.state_width = first.state ? static_cast<Index>(first.state->size()) : 0;
    spec.has_positions = first.positions.has_value();
    if (first.targets) spec.num_targets = static_cast<Index>(first.targets->size());

    for (std::size_t i = 0; i < records.size(); ++i) {
        const GraphRecord& r = records[i];
        const std::string where = "graph " + std::to_string(i) + " ('" + r.id + "')";
        if (r.node_features.cols() != spec.node_width && r.num_nodes() > 0)
            throw ValidationError(where + ": node width differs from dataset");
        const Index ew = r.edge_features ? r.edge_features->cols() : 0;
        if (ew != spec.edge_width && r.num_edges() > 0)
            throw ValidationError(where + ": edge feature width differs from dataset");
        const Task task = r.targets ? Task::GraphRegression
                                    : (r.label ? Task::GraphClassification : Task::NodeClassification);
        if (task != spec.task) throw ValidationError(where + ": mixed supervision kinds");
        if (r.targets && static_cast<Index>(r.targets->size()) != spec.num_targets)
            throw ValidationError(where + ": target count differs from dataset");
        if (r.label) spec.num_classes = std::max<Index>(spec.num_classes, *r.label + 1);
        if (r.node_labels)
            for (int l : *r.node_labels)
                spec.num_classes = std::max<Index>(spec.num_classes, l + 1);
    }
    for (Index k = 0; k < spec.num_targets; ++k)
        spec.target_names.push_back("t" + std::to_string(k));
    return spec;
}

/// Load a JSONL dataset (one graph object per line). Malformed lines
/// raise errors naming the 1-based line number.
inline std::pair<DatasetSpec, std::vector<GraphRecord>> load_jsonl_dataset(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset '" + path + "'");
    std::vector<GraphRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            records.push_back(graph_record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (records.empty()) throw ValidationError("dataset '" + path + "': no graphs");
    DatasetSpec spec = dataset_spec_from_records(records);
    return {std::move(spec), std::move(records)};
}

inline void write_jsonl_dataset(const std::string& path, const std::vector<GraphRecord>& records) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset '" + path + "'");
    for (const auto& rec : records) out << graph_record_to_json(rec).dump() << "\n";
}

/// Load a citation-style dataset from two TSV files. Nodes:
/// `node_id \t f_1 ... f_F \t label`; edges: `src_id \t dst_id`. Node ids
/// are remapped to [0,N) in file order, labels to ints by sorted label
/// string, and every citation is stored in both directions.
inline std::pair<DatasetSpec, GraphRecord> load_citation_dataset(const std::string& nodes_path,
                                                                 const std::string& edges_path) {
    std::ifstream nodes_in(nodes_path);
    if (!nodes_in) throw IoError("cannot open nodes file '" + nodes_path + "'");

    std::map<std::string, Index> id_map;
    std::vector<std::vector<double>> features;
    std::vector<std::string> labels;
    std::string line;
    while (std::getline(nodes_in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<std::string> cols;
        std::string col;
        while (std::getline(ss, col, '\t')) cols.push_back(col);
        if (cols.size() < 2)
            throw ValidationError("nodes file: need id, features, label; got '" + line + "'");
        if (!id_map.emplace(cols.front(), static_cast<Index>(features.size())).second)
            throw ValidationError("nodes file: duplicate node id '" + cols.front() + "'");
        std::vector<double> f;
        for (std::size_t c = 1; c + 1 < cols.size(); ++c) f.push_back(std::stod(cols[c]));
        features.push_back(std::move(f));
        labels.push_back(cols.back());
    }
    if (features.empty()) throw ValidationError("nodes file '" + nodes_path + "': no nodes");
    const Index width = static_cast<Index>(features.front().size());
    for (const auto& f : features)
        if (static_cast<Index>(f.size()) != width)
            throw ValidationError("nodes file: inconsistent feature widths");

    std::vector<std::string> sorted_labels = labels;
    std::sort(sorted_labels.begin(), sorted_labels.end());
    sorted_labels.erase(std::unique(sorted_labels.begin(), sorted_labels.end()),
                        sorted_labels.end());
    std::map<std::string, int> label_map;
    for (std::size_t i = 0; i < sorted_labels.size(); ++i)
        label_map[sorted_labels[i]] = static_cast<int>(i);

    GraphRecord rec;
    rec.id = nodes_path;
    rec.node_features = Matrix(static_cast<Index>(features.size()), width);
    for (Index r = 0; r < rec.node_features.rows(); ++r)
        for (Index c = 0; c < width; ++c)
            rec.node_features(r, c) = features[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    std::vector<int> node_labels;
    for (const auto& l : labels) node_labels.push_back(label_map[l]);
    rec.node_labels = std::move(node_labels);

    std::ifstream edges_in(edges_path);
    if (!edges_in) throw IoError("cannot open edges file '" + edges_path + "'");
    std::set<std::pair<Index, Index>> seen;
    while (std::getline(edges_in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string src, dst;
        if (!std::getline(ss, src, '\t') || !std::getline(ss, dst, '\t'))
            throw ValidationError("edges file: need 'src_id\\tdst_id', got '" + line + "'");
        auto s = id_map.find(src);
        auto d = id_map.find(dst);
        if (s == id_map.end()) throw ValidationError("edges file: unknown node id '" + src + "'");
        if (d == id_map.end()) throw ValidationError("edges file: unknown node id '" + dst + "'");
        if (seen.insert({s->second, d->second}).second)
            rec.edge_index.push_back({s->second, d->second});
        if (s->second != d->second && seen.insert({d->second, s->second}).second)
            rec.edge_index.push_back({d->second, s->second});
    }
    rec.validate();

    DatasetSpec spec;
    spec.task = Task::NodeClassification;
    spec.node_width = width;
    spec.num_classes = static_cast<Index>(sorted_labels.size());
    return {std::move(spec), std::move(rec)};
}

/// Gaussian-basis parameters for distance expansion.
struct BasisSpec {
    Index count = 20;
    double gamma = 10.0;
    double r_max = 4.0;
};

/// Replace a record's connectivity with all ordered pairs within the
/// cutoff radius (self excluded) and attach basis-expanded distances as
/// edge features.
inline GraphRecord expand_distances(const GraphRecord& record, double cutoff,
                                    const BasisSpec& basis = {}) {
    if (cutoff <= 0.0) throw ContractError("expand_distances: cutoff must be positive");
    if (!record.positions) throw ContractError("expand_distances: record has no positions");
    GraphRecord out = record;
    out.edge_index.clear();
    std::vector<double> distances;
    const Matrix& pos = *record.positions;
    for (Index i = 0; i < pos.rows(); ++i)
        for (Index j = 0; j < pos.rows(); ++j) {
            if (i == j) continue;
            double d2 = 0.0;
            for (Index c = 0; c < 3; ++c) {
                const double delta = pos(i, c) - pos(j, c);
                d2 += delta * delta;
            }
            const double d = std::sqrt(d2);
            if (d <= cutoff) {
                out.edge_index.push_back({i, j});
                distances.push_back(d);
            }
        }
    out.edge_features = gaussian_basis(distances, basis_centers(basis.count, basis.r_max),
                                       basis.gamma);
    out.validate();
    return out;
}

/// Deterministic shuffled split into train/val/test by fractions.
inline std::tuple<std::vector<GraphRecord>, std::vector<GraphRecord>, std::vector<GraphRecord>>
split_dataset(const std::vector<GraphRecord>& records, const std::array<double, 3>& fractions,
              std::uint64_t seed) {
    double total = fractions[0] + fractions[1] + fractions[2];
    if (std::abs(total - 1.0) > 1e-9)
        throw ContractError("split fractions must sum to 1, got " + std::to_string(total));
    for (double f : fractions)
        if (f < 0.0) throw ContractError("split fractions must be non-negative");

    std::vector<Index> order(records.size());
    std::iota(order.begin(), order.end(), Index{0});
    Rng rng(seed);
    rng.shuffle(order);

    const Index n = static_cast<Index>(records.size());
    const Index cut1 = static_cast<Index>(std::llround(fractions[0] * static_cast<double>(n)));
    const Index cut2 = static_cast<Index>(
        std::llround((fractions[0] + fractions[1]) * static_cast<double>(n)));
    std::vector<GraphRecord> train, val, test;
    for (Index i = 0; i < n; ++i) {
        const GraphRecord& r = records[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        if (i < cut1)
            train.push_back(r);
        else if (i < cut2)
            val.push_back(r);
        else
            test.push_back(r);
    }
    return {std::move(train), std::move(val), std::move(test)};
}

} // namespace raggednn
