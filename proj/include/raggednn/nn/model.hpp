// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "raggednn/ad/tape.hpp"
#include "raggednn/adjacency.hpp"
#include "raggednn/graph.hpp"
#include "raggednn/nn/common.hpp"
#include "raggednn/nn/dense.hpp"
#include "raggednn/nn/gcn.hpp"
#include "raggednn/nn/interaction.hpp"
#include "raggednn/nn/megnet.hpp"
#include "raggednn/nn/message_passing.hpp"
#include "raggednn/nn/pooling.hpp"
#include "raggednn/nn/readout.hpp"
#include "raggednn/nn/schnet.hpp"
#include "raggednn/task.hpp"

namespace raggednn {

/// Declarative model description; the JSON interchange schema for the
/// CLI and checkpoints.
struct ModelSpec {
    std::string model;           // gcn|interaction|mpn|schnet|megnet|unet
    std::string task;            // node_classification|graph_classification|graph_regression
    std::vector<Index> layers;   // conv widths for gcn; other models ignore
    std::string readout;         // sum|mean|max|set2set; "" = model default
    Index node_input = 0;        // widths.node_input
    Index edge_input = 0;        // widths.edge_input (0 = no edge features)
    Index state_input = 0;       // widths.state_input (0 = no state input)
    Index hidden = 64;           // widths.hidden
    Index message = 0;           // widths.message (0 = hidden)
    Index output = 0;            // widths.output: classes or targets
    Index steps = 3;
    double pool_ratio = 0.5;
    std::uint64_t seed = 0;
    std::string update = "mlp";  // mpn update function: mlp|gru
    bool shared_weights = true;  // mpn: one parameter set across steps

    Index message_width() const { return message > 0 ? message : hidden; }
    Task task_kind() const { return task_from_string(task); }
};

inline ModelSpec model_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("model spec: expected a JSON object");
    ModelSpec spec;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "model")
                spec.model = value.get<std::string>();
            else if (key == "task")
                spec.task = value.get<std::string>();
            else if (key == "layers")
                spec.layers = value.get<std::vector<Index>>();
            else if (key == "readout")
                spec.readout = value.get<std::string>();
            else if (key == "steps")
                spec.steps = value.get<Index>();
            else if (key == "pool_ratio")
                spec.pool_ratio = value.get<double>();
            else if (key == "seed")
                spec.seed = value.get<std::uint64_t>();
            else if (key == "update")
                spec.update = value.get<std::string>();
            else if (key == "shared_weights")
                spec.shared_weights = value.get<bool>();
            else if (key == "widths") {
                if (!value.is_object()) throw ConfigError("model spec: widths must be an object");
                for (const auto& [wkey, wvalue] : value.items()) {
                    if (wkey == "node_input")
                        spec.node_input = wvalue.get<Index>();
                    else if (wkey == "edge_input")
                        spec.edge_input = wvalue.get<Index>();
                    else if (wkey == "state_input")
                        spec.state_input = wvalue.get<Index>();
                    else if (wkey == "hidden")
                        spec.hidden = wvalue.get<Index>();
                    else if (wkey == "message")
                        spec.message = wvalue.get<Index>();
                    else if (wkey == "output")
                        spec.output = wvalue.get<Index>();
                    else
                        throw ConfigError("model spec: unknown widths field '" + wkey + "'");
                }
            } else {
                throw ConfigError("model spec: unknown field '" + key + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("model spec: bad value for '" + key + "': " + e.what());
        }
    }
    return spec;
}

inline nlohmann::json model_spec_to_json(const ModelSpec& s) {
    nlohmann::json widths{{"node_input", s.node_input}, {"edge_input", s.edge_input},
                          {"state_input", s.state_input}, {"hidden", s.hidden},
                          {"message", s.message},         {"output", s.output}};
    return nlohmann::json{{"model", s.model},
                          {"task", s.task},
                          {"layers", s.layers},
                          {"readout", s.readout},
                          {"widths", widths},
                          {"steps", s.steps},
                          {"pool_ratio", s.pool_ratio},
                          {"seed", s.seed},
                          {"update", s.update},
                          {"shared_weights", s.shared_weights}};
}

/// Model output on the tape: per-graph rows (B, out) for graph tasks,
/// per-node rows (N_total, out) for node tasks.
struct Prediction {
    ad::NodeId output;
    bool per_node = false;
};

class Model {
public:
    virtual ~Model() = default;

    /// Record the forward pass for one batch. Re-entrant across batches
    /// only when parameters are frozen.
    virtual Prediction forward(ad::Tape& t, const DisjointBatch& batch) = 0;

    virtual void collect(std::vector<ParamRef>& out) = 0;

    std::vector<ParamRef> parameters() {
        std::vector<ParamRef> out;
        collect(out);
        return out;
    }

    const ModelSpec& spec() const { return spec_; }

protected:
    explicit Model(ModelSpec spec) : spec_(std::move(spec)) {}

    void check_node_input(const DisjointBatch& d) const {
        if (d.node_matrix.cols() != spec_.node_input)
            throw DimensionError("model: node feature width " +
                                 std::to_string(d.node_matrix.cols()) + " != widths.node_input " +
                                 std::to_string(spec_.node_input));
    }

    void check_inputs(const DisjointBatch& d) const {
        check_node_input(d);
        if (spec_.edge_input > 0) {
            if (!d.edge_matrix)
                throw ContractError("model '" + spec_.model + "' expects edge features");
            if (d.edge_matrix->cols() != spec_.edge_input)
                throw DimensionError("model: edge feature width " +
                                     std::to_string(d.edge_matrix->cols()) +
                                     " != widths.edge_input " + std::to_string(spec_.edge_input));
        }
    }

    ModelSpec spec_;
};

/// Configurable per-graph readout shared by the graph-task heads.
struct ReadoutOp {
    std::string kind = "mean";
    std::optional<Set2Set> set2set;

    ReadoutOp() = default;
    ReadoutOp(const std::string& kind_, Index width, Rng& rng) : kind(kind_) {
        if (kind == "set2set")
            set2set.emplace(width, 3, rng);
        else if (kind != "sum" && kind != "mean" && kind != "max")
            throw ConfigError("readout: unknown kind '" + kind + "' (sum|mean|max|set2set)");
    }

    Index out_width(Index in) const { return kind == "set2set" ? 2 * in : in; }

    ad::NodeId apply(ad::Tape& t, ad::NodeId values, const std::vector<Index>& graph_ids,
                     Index num_graphs) {
        if (kind == "set2set") return set2set->apply(t, values, graph_ids, num_graphs);
        if (kind == "sum") return readout_reduce(t, values, graph_ids, num_graphs, Reducer::Sum);
        if (kind == "max") return readout_reduce(t, values, graph_ids, num_graphs, Reducer::Max);
        return readout_reduce(t, values, graph_ids, num_graphs, Reducer::Mean);
    }

    void collect(const std::string& prefix, std::vector<ParamRef>& out) {
        if (set2set) set2set->collect(prefix + ".set2set", out);
    }
};

namespace detail {

inline void require_positive(Index v, const std::string& field) {
    if (v <= 0) throw ConfigError(field + ": must be positive, got " + std::to_string(v));
}

inline std::string default_readout(const std::string& model) {
    if (model == "mpn") return "set2set";
    if (model == "schnet" || model == "interaction") return "sum";
    return "mean";
}

} // namespace detail

/// Stack of graph convolutions with renormalized-adjacency propagation.
class GcnModel final : public Model {
public:
    explicit GcnModel(ModelSpec spec) : Model(std::move(spec)) {
        Rng rng(spec_.seed);
        Index width = spec_.node_input;
        for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
            if (spec_.layers[i] <= 0)
                throw ConfigError("layers[" + std::to_string(i) + "]: width must be positive");
            convs_.emplace_back(width, spec_.layers[i], Activation::Relu, rng);
            width = spec_.layers[i];
        }
        if (is_graph_task(spec_.task_kind())) {
            readout_ = ReadoutOp(spec_.readout, width, rng);
            head_ = DenseLayer(readout_.out_width(width), spec_.output, Activation::Linear, rng);
        } else {
            // the output projection is itself a propagating convolution
            convs_.emplace_back(width, spec_.output, Activation::Linear, rng);
        }
    }

    Prediction forward(ad::Tape& t, const DisjointBatch& d) override {
        check_node_input(d);
        CsrEdges a_norm = csr_to_edges(gcn_normalize(adjacency_from_edges(d)));
        ad::NodeId h = t.constant(d.node_matrix);
        for (auto& conv : convs_) h = gcn_conv(t, h, a_norm, d.num_nodes(), conv);
        if (!is_graph_task(spec_.task_kind())) return {h, true};
        ad::NodeId r = readout_.apply(t, h, d.node_graph_id, d.num_graphs);
        return {head_.apply(t, r), false};
    }

    void collect(std::vector<ParamRef>& out) override {
        for (std::size_t i = 0; i < convs_.size(); ++i)
            convs_[i].collect("conv" + std::to_string(i), out);
        readout_.collect("readout", out);
        if (is_graph_task(spec_.task_kind())) head_.collect("head", out);
    }

private:
    std::vector<DenseLayer> convs_;
    ReadoutOp readout_;
    DenseLayer head_;
};

/// Interaction network: T relation/object update blocks.
class InteractionModel final : public Model {
public:
    explicit InteractionModel(ModelSpec spec) : Model(std::move(spec)) {
        if (spec_.edge_input <= 0)
            throw ConfigError("widths.edge_input: interaction model needs edge features");
        Rng rng(spec_.seed);
        embed_ = DenseLayer(spec_.node_input, spec_.hidden, Activation::Linear, rng);
        Index edge_width = spec_.edge_input;
        for (Index i = 0; i < spec_.steps; ++i) {
            blocks_.emplace_back(spec_.hidden, edge_width, spec_.message_width(), rng);
            edge_width = spec_.message_width();
        }
        if (is_graph_task(spec_.task_kind())) {
            readout_ = ReadoutOp(spec_.readout, spec_.hidden, rng);
            head_ = DenseLayer(readout_.out_width(spec_.hidden), spec_.output, Activation::Linear,
                               rng);
        } else {
            head_ = DenseLayer(spec_.hidden, spec_.output, Activation::Linear, rng);
        }
    }

    Prediction forward(ad::Tape& t, const DisjointBatch& d) override {
        check_inputs(d);
        if (!d.edge_matrix) throw ContractError("interaction model expects edge features");
        ad::NodeId h = embed_.apply(t, t.constant(d.node_matrix));
        ad::NodeId e = t.constant(*d.edge_matrix);
        for (auto& block : blocks_) {
            auto out = block.apply(t, h, e, d);
            h = out.nodes;
            e = out.edges;
        }
        if (!is_graph_task(spec_.task_kind())) return {head_.apply(t, h), true};
        ad::NodeId r = readout_.apply(t, h, d.node_graph_id, d.num_graphs);
        return {head_.apply(t, r), false};
    }

    void collect(std::vector<ParamRef>& out) override {
        embed_.collect("embed", out);
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            blocks_[i].collect("block" + std::to_string(i), out);
        readout_.collect("readout", out);
        head_.collect("head", out);
    }

private:
    DenseLayer embed_;
    std::vector<InteractionBlock> blocks_;
    ReadoutOp readout_;
    DenseLayer head_;
};

/// Gilmer-style message passing network.
class MpnModel final : public Model {
public:
    explicit MpnModel(ModelSpec spec) : Model(std::move(spec)) {
        Rng rng(spec_.seed);
        UpdateKind kind;
        if (spec_.update == "mlp")
            kind = UpdateKind::Mlp;
        else if (spec_.update == "gru")
            kind = UpdateKind::Gru;
        else
            throw ConfigError("update: unknown kind '" + spec_.update + "' (mlp|gru)");
        embed_ = DenseLayer(spec_.node_input, spec_.hidden, Activation::Linear, rng);
        passing_ = MessagePassing(spec_.hidden, spec_.edge_input, spec_.message_width(),
                                  spec_.steps, spec_.shared_weights, kind, rng);
        if (is_graph_task(spec_.task_kind())) {
            readout_ = ReadoutOp(spec_.readout, spec_.hidden, rng);
            head_ = Mlp(readout_.out_width(spec_.hidden), {spec_.hidden, spec_.output},
                        Activation::Relu, Activation::Linear, rng);
        } else {
            head_ = Mlp(spec_.hidden, {spec_.hidden, spec_.output}, Activation::Relu,
                        Activation::Linear, rng);
        }
    }

    Prediction forward(ad::Tape& t, const DisjointBatch& d) override {
        check_inputs(d);
        ad::NodeId h = embed_.apply(t, t.constant(d.node_matrix));
        std::optional<ad::NodeId> e;
        if (spec_.edge_input > 0) e = t.constant(*d.edge_matrix);
        h = passing_.run(t, h, d, e);
        if (!is_graph_task(spec_.task_kind())) return {head_.apply(t, h), true};
        ad::NodeId r = readout_.apply(t, h, d.node_graph_id, d.num_graphs);
        return {head_.apply(t, r), false};
    }

    void collect(std::vector<ParamRef>& out) override {
        embed_.collect("embed", out);
        passing_.collect("mp", out);
        readout_.collect("readout", out);
        head_.collect("head", out);
    }

private:
    DenseLayer embed_;
    MessagePassing passing_;
    ReadoutOp readout_;
    Mlp head_;
};

/// Continuous-filter convolution stack over distance-expanded edges.
/// Per-atom contributions are reduced per graph after the atomwise head,
/// so sum readout is the classic atomwise-energy sum.
class SchnetModel final : public Model {
public:
    explicit SchnetModel(ModelSpec spec) : Model(std::move(spec)) {
        if (spec_.edge_input <= 0)
            throw ConfigError("widths.edge_input: schnet needs basis-expanded edge features");
        const std::string readout = spec_.readout.empty() ? "sum" : spec_.readout;
        if (readout == "set2set")
            throw ConfigError("readout: set2set is not supported for schnet");
        reducer_ = readout == "sum" ? Reducer::Sum : (readout == "max" ? Reducer::Max : Reducer::Mean);
        if (readout != "sum" && readout != "mean" && readout != "max")
            throw ConfigError("readout: unknown kind '" + readout + "'");
        Rng rng(spec_.seed);
        embed_ = DenseLayer(spec_.node_input, spec_.hidden, Activation::Linear, rng);
        for (Index i = 0; i < spec_.steps; ++i)
            blocks_.emplace_back(spec_.hidden, spec_.edge_input, rng);
        const Index mid = std::max<Index>(1, spec_.hidden / 2);
        head_ = Mlp(spec_.hidden, {mid, spec_.output}, Activation::ShiftedSoftplus,
                    Activation::Linear, rng);
    }

    Prediction forward(ad::Tape& t, const DisjointBatch& d) override {
        check_inputs(d);
        if (!d.edge_matrix) throw ContractError("schnet model expects edge features");
        ad::NodeId x = embed_.apply(t, t.constant(d.node_matrix));
        ad::NodeId e = t.constant(*d.edge_matrix);
        for (auto& block : blocks_) x = block.apply(t, x, e, d);
        ad::NodeId per_node = head_.apply(t, x);
        if (!is_graph_task(spec_.task_kind())) return {per_node, true};
        return {readout_reduce(t, per_node, d.node_graph_id, d.num_graphs, reducer_), false};
    }

    void collect(std::vector<ParamRef>& out) override {
        embed_.collect("embed", out);
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            blocks_[i].collect("interaction" + std::to_string(i), out);
        head_.collect("head", out);
    }

private:
    DenseLayer embed_;
    std::vector<SchnetInteraction> blocks_;
    Mlp head_;
    Reducer reducer_ = Reducer::Sum;
};

/// Graph-network stack with per-graph state; readout concatenates node,
/// edge, and state summaries.
class MegnetModel final : public Model {
public:
    explicit MegnetModel(ModelSpec spec) : Model(std::move(spec)) {
        if (spec_.edge_input <= 0)
            throw ConfigError("widths.edge_input: megnet needs edge features");
        Rng rng(spec_.seed);
        const Index edge_hidden = spec_.message_width();
        node_embed_ = DenseLayer(spec_.node_input, spec_.hidden, Activation::Linear, rng);
        edge_embed_ = DenseLayer(spec_.edge_input, edge_hidden, Activation::Linear, rng);
        state_embed_ = DenseLayer(std::max<Index>(1, spec_.state_input), spec_.hidden,
                                  Activation::Linear, rng);
        for (Index i = 0; i < spec_.steps; ++i)
            blocks_.emplace_back(spec_.hidden, edge_hidden, spec_.hidden, rng);
        if (is_graph_task(spec_.task_kind())) {
            node_readout_ = ReadoutOp(spec_.readout, spec_.hidden, rng);
            edge_readout_ = ReadoutOp(spec_.readout, edge_hidden, rng);
            const Index concat_width = node_readout_.out_width(spec_.hidden) +
                                       edge_readout_.out_width(edge_hidden) + spec_.hidden;
            head_ = Mlp(concat_width, {spec_.hidden, spec_.output}, Activation::Relu,
                        Activation::Linear, rng);
        } else {
            head_ = Mlp(spec_.hidden, {spec_.hidden, spec_.output}, Activation::Relu,
                        Activation::Linear, rng);
        }
    }

    Prediction forward(ad::Tape& t, const DisjointBatch& d) override {
        check_inputs(d);
        if (!d.edge_matrix) throw ContractError("megnet model expects edge features");
        if (spec_.state_input > 0 && !d.state)
            throw ContractError("megnet model expects a per-graph state vector");
        ad::NodeId h = node_embed_.apply(t, t.constant(d.node_matrix));
        ad::NodeId e = edge_embed_.apply(t, t.constant(*d.edge_matrix));
        Matrix raw_state = d.state && spec_.state_input > 0 ? *d.state : Matrix(d.num_graphs, 1);
        ad::NodeId u = state_embed_.apply(t, t.constant(std::move(raw_state)));
        for (auto& block : blocks_) {
            auto out = block.apply(t, h, e, u, d);
            h = out.nodes;
            e = out.edges;
            u = out.state;
        }
        if (!is_graph_task(spec_.task_kind())) return {head_.apply(t, h), true};
        ad::NodeId rn = node_readout_.apply(t, h, d.node_graph_id, d.num_graphs);
        ad::NodeId re = edge_readout_.apply(t, e, d.edge_graph_id, d.num_graphs);
        return {head_.apply(t, t.concat_cols({rn, re, u})), false};
    }

    void collect(std::vector<ParamRef>& out) override {
        node_embed_.collect("node_embed", out);
        edge_embed_.collect("edge_embed", out);
        state_embed_.collect("state_embed", out);
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            blocks_[i].collect("block" + std::to_string(i), out);
        node_readout_.collect("node_readout", out);
        edge_readout_.collect("edge_readout", out);
        head_.collect("head", out);
    }

private:
    DenseLayer node_embed_, edge_embed_, state_embed_;
    std::vector<MegnetBlock> blocks_;
    ReadoutOp node_readout_, edge_readout_;
    Mlp head_;
};

/// Graph U-net: two {conv, top-k pool} levels, a bottom conv, and the
/// mirrored {unpool, conv} path with additive skip connections.
class UnetModel final : public Model {
public:
    static constexpr Index kLevels = 2;

    explicit UnetModel(ModelSpec spec) : Model(std::move(spec)) {
        if (spec_.pool_ratio <= 0.0 || spec_.pool_ratio > 1.0)
            throw ConfigError("pool_ratio: must be in (0,1], got " +
                              std::to_string(spec_.pool_ratio));
        Rng rng(spec_.seed);
        Index width = spec_.node_input;
        for (Index level = 0; level < kLevels; ++level) {
            down_convs_.emplace_back(width, spec_.hidden, Activation::Relu, rng);
            pools_.emplace_back(spec_.hidden, spec_.pool_ratio, rng);
            width = spec_.hidden;
        }
        bottom_ = DenseLayer(spec_.hidden, spec_.hidden, Activation::Relu, rng);
        for (Index level = 0; level < kLevels; ++level)
            up_convs_.emplace_back(spec_.hidden, spec_.hidden, Activation::Relu, rng);
        if (is_graph_task(spec_.task_kind())) {
            readout_ = ReadoutOp(spec_.readout, spec_.hidden, rng);
            head_ = DenseLayer(readout_.out_width(spec_.hidden), spec_.output, Activation::Linear,
                               rng);
        } else {
            head_ = DenseLayer(spec_.hidden, spec_.output, Activation::Linear, rng);
        }
    }

    Prediction forward(ad::Tape& t, const DisjointBatch& d) override {
        check_node_input(d);
        struct Level {
            ad::NodeId skip;           // conv output before pooling
            std::vector<Index> kept;   // pooled row -> row in this level's graph
            Index num_nodes = 0;       // node count of this level's graph
            CsrEdges a_norm;           // normalized topology of this level's graph
        };
        std::vector<Level> levels;

        EdgeList edges = d.edge_index;
        std::vector<Index> edge_ids = d.edge_graph_id;
        std::vector<Index> node_ids = d.node_graph_id;
        Index num_nodes = d.num_nodes();
        ad::NodeId h = t.constant(d.node_matrix);

        for (Index level = 0; level < kLevels; ++level) {
            CsrEdges a = csr_to_edges(gcn_normalize(adjacency_from_edge_list(edges, num_nodes)));
            h = gcn_conv(t, h, a, num_nodes, down_convs_[static_cast<std::size_t>(level)]);
            TopKPoolOut pooled = pools_[static_cast<std::size_t>(level)].apply(
                t, h, node_ids, d.num_graphs, edges, edge_ids);
            levels.push_back({h, pooled.kept, num_nodes, std::move(a)});
            h = pooled.values;
            edges = std::move(pooled.edges);
            edge_ids = std::move(pooled.edge_graph_id);
            node_ids = std::move(pooled.node_graph_id);
            num_nodes = pooled.num_nodes;
        }

        {
            CsrEdges a = csr_to_edges(gcn_normalize(adjacency_from_edge_list(edges, num_nodes)));
            h = gcn_conv(t, h, a, num_nodes, bottom_);
        }

        for (Index level = kLevels - 1; level >= 0; --level) {
            const Level& lv = levels[static_cast<std::size_t>(level)];
            h = t.add(topk_unpool(t, h, lv.kept, lv.num_nodes), lv.skip);
            h = gcn_conv(t, h, lv.a_norm, lv.num_nodes, up_convs_[static_cast<std::size_t>(level)]);
        }

        if (!is_graph_task(spec_.task_kind())) return {head_.apply(t, h), true};
        ad::NodeId r = readout_.apply(t, h, d.node_graph_id, d.num_graphs);
        return {head_.apply(t, r), false};
    }

    void collect(std::vector<ParamRef>& out) override {
        for (std::size_t i = 0; i < down_convs_.size(); ++i) {
            down_convs_[i].collect("down" + std::to_string(i), out);
            pools_[i].collect("pool" + std::to_string(i), out);
        }
        bottom_.collect("bottom", out);
        for (std::size_t i = 0; i < up_convs_.size(); ++i)
            up_convs_[i].collect("up" + std::to_string(i), out);
        readout_.collect("readout", out);
        head_.collect("head", out);
    }

private:
    std::vector<DenseLayer> down_convs_;
    std::vector<TopKPool> pools_;
    DenseLayer bottom_;
    std::vector<DenseLayer> up_convs_;
    ReadoutOp readout_;
    DenseLayer head_;
};

inline std::unique_ptr<Model> build_model(const ModelSpec& spec) {
    detail::require_positive(spec.node_input, "widths.node_input");
    detail::require_positive(spec.output, "widths.output");
    detail::require_positive(spec.hidden, "widths.hidden");
    if (spec.steps < 1) throw ConfigError("steps: must be >= 1");
    task_from_string(spec.task);

    ModelSpec s = spec;
    if (s.readout.empty()) s.readout = detail::default_readout(s.model);

    if (s.model == "gcn") return std::make_unique<GcnModel>(std::move(s));
    if (s.model == "interaction") return std::make_unique<InteractionModel>(std::move(s));
    if (s.model == "mpn") return std::make_unique<MpnModel>(std::move(s));
    if (s.model == "schnet") return std::make_unique<SchnetModel>(std::move(s));
    if (s.model == "megnet") return std::make_unique<MegnetModel>(std::move(s));
    if (s.model == "unet") return std::make_unique<UnetModel>(std::move(s));
    throw ConfigError("model: unknown architecture '" + s.model +
                      "' (gcn|interaction|mpn|schnet|megnet|unet)");
}

} // namespace raggednn
