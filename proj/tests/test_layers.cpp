// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "raggednn/nn/gcn.hpp"
#include "raggednn/nn/interaction.hpp"
#include "raggednn/nn/layer_gradcheck.hpp"
#include "raggednn/nn/megnet.hpp"
#include "raggednn/nn/message_passing.hpp"
#include "raggednn/nn/pooling.hpp"
#include "raggednn/nn/readout.hpp"
#include "raggednn/nn/schnet.hpp"
#include "support/oracles.hpp"

using namespace raggednn;
using ad::NodeId;
using ad::Tape;

namespace {

DenseLayer identity_dense(Index n) {
    DenseLayer l;
    Matrix w(n, n);
    for (Index i = 0; i < n; ++i) w(i, i) = 1.0;
    l.weight = ad::Variable(std::move(w));
    l.bias = ad::Variable(Matrix(1, n));
    l.activation = Activation::Linear;
    return l;
}

/// Single linear layer selecting input columns [begin, end).
Mlp pickoff_mlp(Index in, Index begin, Index end) {
    Mlp m;
    DenseLayer l;
    Matrix w(in, end - begin);
    for (Index c = begin; c < end; ++c) w(c, c - begin) = 1.0;
    l.weight = ad::Variable(std::move(w));
    l.bias = ad::Variable(Matrix(1, end - begin));
    l.activation = Activation::Linear;
    m.layers.push_back(std::move(l));
    return m;
}

DisjointBatch tiny_disjoint(Index num_nodes, Index width, EdgeList edges) {
    DisjointBatch d;
    d.node_matrix = Matrix(num_nodes, width);
    d.edge_index = std::move(edges);
    d.node_graph_id.assign(static_cast<std::size_t>(num_nodes), 0);
    d.edge_graph_id.assign(d.edge_index.size(), 0);
    d.num_graphs = 1;
    return d;
}

} // namespace

TEST_CASE("dense layer basics") {
    Tape t;
    SECTION("identity weights are the identity") {
        DenseLayer l = identity_dense(2);
        Matrix x{{3, -4}, {0.5, 2}};
        CHECK(t.value(l.apply(t, t.constant(x))) == x);
    }
    SECTION("affine example") {
        DenseLayer l;
        l.weight = ad::Variable(Matrix{{1}, {1}});
        l.bias = ad::Variable(Matrix{{1}});
        l.activation = Activation::Linear;
        CHECK(t.value(l.apply(t, t.constant(Matrix{{1, 1}}))) == Matrix{{3}});
    }
    SECTION("relu clamps") {
        DenseLayer l = identity_dense(1);
        l.activation = Activation::Relu;
        CHECK(t.value(l.apply(t, t.constant(Matrix{{-5}}))) == Matrix{{0}});
    }
    SECTION("width mismatch") {
        DenseLayer l = identity_dense(2);
        CHECK_THROWS_AS(l.apply(t, t.constant(Matrix(1, 3))), DimensionError);
    }
}

TEST_CASE("message_aggregate sums sender pickoffs at the receiver") {
    DisjointBatch d = tiny_disjoint(3, 1, {{2, 0}, {2, 1}});
    d.node_matrix = Matrix{{1}, {2}, {3}};
    Mlp sender_pickoff = pickoff_mlp(2, 1, 2);  // concat(h_i, h_j) -> h_j
    Tape t;
    NodeId m = message_aggregate(t, t.constant(d.node_matrix), d, std::nullopt, sender_pickoff);
    CHECK(t.value(m) == Matrix{{0}, {0}, {3}});
}

TEST_CASE("message_aggregate with no edges returns exact zeros") {
    DisjointBatch d = tiny_disjoint(3, 2, {});
    Mlp fn = pickoff_mlp(4, 2, 4);
    Tape t;
    NodeId m = message_aggregate(t, t.constant(d.node_matrix), d, std::nullopt, fn);
    CHECK(t.value(m) == Matrix(3, 2));
}

TEST_CASE("message_aggregate matches the per-edge loop oracle") {
    Rng rng(101);
    for (int it = 0; it < 10; ++it) {
        GraphBatch g = oracles::random_batch(rng, {.max_graphs = 3, .node_width = 3, .edge_width = 2});
        DisjointBatch d = to_disjoint(g);
        Mlp fn(8, {5, 4}, Activation::Tanh, Activation::Linear, rng);
        Tape t;
        NodeId m = message_aggregate(t, t.constant(d.node_matrix), d,
                                     t.constant(*d.edge_matrix), fn);

        Matrix want(d.num_nodes(), 4);
        for (Index k = 0; k < d.num_edges(); ++k) {
            const Edge& e = d.edge_index[static_cast<std::size_t>(k)];
            Matrix row(1, 8);
            for (Index c = 0; c < 3; ++c) {
                row(0, c) = d.node_matrix(e.receiver, c);
                row(0, 3 + c) = d.node_matrix(e.sender, c);
            }
            row(0, 6) = (*d.edge_matrix)(k, 0);
            row(0, 7) = (*d.edge_matrix)(k, 1);
            Matrix msg = oracles::mlp_eval(fn, row);
            for (Index c = 0; c < 4; ++c) want(e.receiver, c) += msg(0, c);
        }
        CHECK(max_abs_diff(t.value(m), want) <= 1e-10);
    }
}

TEST_CASE("message_pass_step update variants") {
    DisjointBatch d = tiny_disjoint(3, 1, {{2, 0}, {2, 1}});
    d.node_matrix = Matrix{{1}, {2}, {3}};

    MessagePassingStep step;
    step.message_fn = pickoff_mlp(2, 1, 2);
    step.kind = UpdateKind::Mlp;

    SECTION("U(h,m)=m keeps only the message") {
        step.update_mlp = pickoff_mlp(2, 1, 2);
        Tape t;
        NodeId h = step.apply(t, t.constant(d.node_matrix), d, std::nullopt);
        CHECK(t.value(h) == Matrix{{0}, {0}, {3}});
    }
    SECTION("U(h,m)=h ignores messages") {
        step.update_mlp = pickoff_mlp(2, 0, 1);
        Tape t;
        NodeId h = step.apply(t, t.constant(d.node_matrix), d, std::nullopt);
        CHECK(t.value(h) == d.node_matrix);
    }
}

TEST_CASE("two shared-weight steps equal manual double application") {
    Rng rng(55);
    GraphBatch g = oracles::random_batch(rng, {.max_graphs = 3, .node_width = 4});
    DisjointBatch d = to_disjoint(g);
    MessagePassing mp(4, 0, 4, 2, true, UpdateKind::Mlp, rng);

    Tape t;
    NodeId h0 = t.constant(d.node_matrix);
    NodeId two_step = mp.run(t, h0, d, std::nullopt);

    NodeId manual = mp.step(t, mp.step(t, h0, d, std::nullopt, 0), d, std::nullopt, 0);
    CHECK(max_abs_diff(t.value(two_step), t.value(manual)) == 0.0);
    CHECK_THROWS_AS(mp.step(t, h0, d, std::nullopt, 2), ContractError);
}

TEST_CASE("gcn_normalize on a symmetric pair gives all quarters of two") {
    DisjointBatch d = tiny_disjoint(2, 1, {{0, 1}, {1, 0}});
    AdjacencyCsr a = gcn_normalize(adjacency_from_edges(d));
    Matrix dense = oracles::csr_to_dense(a);
    CHECK(max_abs_diff(dense, Matrix{{0.5, 0.5}, {0.5, 0.5}}) <= 1e-15);
}

TEST_CASE("gcn_normalize gives isolated nodes a unit diagonal") {
    DisjointBatch d = tiny_disjoint(3, 1, {{0, 1}, {1, 0}});
    Matrix dense = oracles::csr_to_dense(gcn_normalize(adjacency_from_edges(d)));
    CHECK(dense(2, 2) == 1.0);
}

TEST_CASE("gcn_normalize rejects pre-existing self-loops") {
    DisjointBatch d = tiny_disjoint(2, 1, {{0, 0}});
    CHECK_THROWS_AS(gcn_normalize(adjacency_from_edges(d)), ValidationError);
}

TEST_CASE("gcn_normalize matches the dense oracle on random graphs") {
    Rng rng(202);
    for (int it = 0; it < 20; ++it) {
        GraphBatch g = oracles::random_batch(rng, {.max_graphs = 1, .min_nodes = 2, .max_nodes = 10});
        DisjointBatch d = to_disjoint(g);
        AdjacencyCsr raw = adjacency_from_edges(d);
        Matrix want = oracles::dense_gcn_normalize(oracles::csr_to_dense(raw));
        Matrix got = oracles::csr_to_dense(gcn_normalize(raw));
        CHECK(max_abs_diff(got, want) <= 1e-12);
    }
}

TEST_CASE("gcn_conv on the quarter matrix") {
    DisjointBatch d = tiny_disjoint(2, 1, {{0, 1}, {1, 0}});
    d.node_matrix = Matrix{{1}, {3}};
    CsrEdges a = csr_to_edges(gcn_normalize(adjacency_from_edges(d)));
    DenseLayer l = identity_dense(1);
    Tape t;
    NodeId out = gcn_conv(t, t.constant(d.node_matrix), a, 2, l);
    CHECK(max_abs_diff(t.value(out), Matrix{{2}, {2}}) <= 1e-15);
}

TEST_CASE("gcn_conv with self-loops only is the identity") {
    DisjointBatch d = tiny_disjoint(3, 1, {});
    d.node_matrix = Matrix{{1}, {-2}, {5}};
    CsrEdges a = csr_to_edges(gcn_normalize(adjacency_from_edges(d)));
    DenseLayer l = identity_dense(1);
    Tape t;
    CHECK(t.value(gcn_conv(t, t.constant(d.node_matrix), a, 3, l)) == d.node_matrix);
}

TEST_CASE("gcn_conv equals dense normalized-adjacency matmul") {
    Rng rng(303);
    for (int it = 0; it < 20; ++it) {
        GraphBatch g = oracles::random_batch(rng, {.max_graphs = 2, .max_nodes = 8, .node_width = 3});
        DisjointBatch d = to_disjoint(g);
        AdjacencyCsr norm = gcn_normalize(adjacency_from_edges(d));
        DenseLayer layer(3, 5, Activation::Tanh, rng);

        Tape t;
        NodeId got = gcn_conv(t, t.constant(d.node_matrix), csr_to_edges(norm), d.num_nodes(), layer);

        Matrix mixed = matmul(oracles::csr_to_dense(norm), d.node_matrix);
        Matrix want = oracles::dense_eval(layer, mixed);
        CHECK(max_abs_diff(t.value(got), want) <= 1e-12);
    }
}

TEST_CASE("interaction block with pickoff functions") {
    DisjointBatch d = tiny_disjoint(2, 1, {{0, 1}, {0, 0}});
    d.edge_matrix = Matrix{{1}, {2}};
    InteractionBlock block;
    block.relation_fn = pickoff_mlp(3, 2, 3);  // e' = e
    block.object_fn = pickoff_mlp(2, 1, 2);    // h' = aggregated message

    Tape t;
    auto out = block.apply(t, t.constant(d.node_matrix), t.constant(*d.edge_matrix), d);
    CHECK(t.value(out.nodes) == Matrix{{3}, {0}});
    CHECK(t.value(out.edges) == *d.edge_matrix);
}

TEST_CASE("interaction block without edges applies the object net to zeros") {
    DisjointBatch d = tiny_disjoint(2, 1, {});
    d.node_matrix = Matrix{{4}, {7}};
    d.edge_matrix = Matrix(0, 1);
    InteractionBlock block;
    block.relation_fn = pickoff_mlp(3, 2, 3);
    block.object_fn = pickoff_mlp(2, 0, 1);  // h' = h
    Tape t;
    auto out = block.apply(t, t.constant(d.node_matrix), t.constant(*d.edge_matrix), d);
    CHECK(t.value(out.nodes) == d.node_matrix);
}

TEST_CASE("interaction block matches the loop oracle") {
    Rng rng(404);
    GraphBatch g = oracles::random_batch(rng, {.max_graphs = 3, .node_width = 2, .edge_width = 2});
    DisjointBatch d = to_disjoint(g);
    InteractionBlock block(2, 2, 3, rng);

    Tape t;
    auto out = block.apply(t, t.constant(d.node_matrix), t.constant(*d.edge_matrix), d);

    Matrix relations(d.num_edges(), 3);
    Matrix aggregated(d.num_nodes(), 3);
    for (Index k = 0; k < d.num_edges(); ++k) {
        const Edge& e = d.edge_index[static_cast<std::size_t>(k)];
        Matrix row(1, 6);
        for (Index c = 0; c < 2; ++c) {
            row(0, c) = d.node_matrix(e.receiver, c);
            row(0, 2 + c) = d.node_matrix(e.sender, c);
            row(0, 4 + c) = (*d.edge_matrix)(k, c);
        }
        Matrix rel = oracles::mlp_eval(block.relation_fn, row);
        for (Index c = 0; c < 3; ++c) {
            relations(k, c) = rel(0, c);
            aggregated(e.receiver, c) += rel(0, c);
        }
    }
    Matrix want(d.num_nodes(), 2);
    for (Index i = 0; i < d.num_nodes(); ++i) {
        Matrix row(1, 5);
        for (Index c = 0; c < 2; ++c) row(0, c) = d.node_matrix(i, c);
        for (Index c = 0; c < 3; ++c) row(0, 2 + c) = aggregated(i, c);
        Matrix h = oracles::mlp_eval(block.object_fn, row);
        for (Index c = 0; c < 2; ++c) want(i, c) = h(0, c);
    }
    CHECK(max_abs_diff(t.value(out.edges), relations) <= 1e-10);
    CHECK(max_abs_diff(t.value(out.nodes), want) <= 1e-10);
}

TEST_CASE("gaussian basis values") {
    SECTION("scalar evaluation at zero") {
        Matrix out = gaussian_basis({0.0}, {0.0, 1.0}, 1.0);
        CHECK(out(0, 0) == 1.0);
        CHECK(out(0, 1) == Catch::Approx(std::exp(-1.0)).epsilon(1e-15));
    }
    SECTION("peak at the center") {
        Matrix out = gaussian_basis({0.7}, {0.1, 0.7, 1.3}, 4.0);
        CHECK(out(0, 1) == 1.0);
        CHECK(out(0, 0) < 1.0);
    }
    SECTION("monotone decay away from the center") {
        Matrix out = gaussian_basis({0.5, 1.0, 1.5, 2.0}, {0.5}, 2.0);
        for (Index i = 1; i < 4; ++i) CHECK(out(i, 0) < out(i - 1, 0));
    }
    SECTION("gamma must be positive") {
        CHECK_THROWS_AS(gaussian_basis({1.0}, {0.0}, 0.0), ContractError);
    }
}

TEST_CASE("schnet interaction pre-residual aggregate") {
    DisjointBatch d = tiny_disjoint(2, 1, {{0, 1}});
    d.node_matrix = Matrix{{1}, {2}};
    d.edge_matrix = Matrix{{3}};

    SchnetInteraction block;
    block.embed_in = identity_dense(1);
    block.filter_fn = pickoff_mlp(1, 0, 1);
    block.atomwise = pickoff_mlp(1, 0, 1);

    Tape t;
    NodeId out = block.apply(t, t.constant(d.node_matrix), t.constant(*d.edge_matrix), d);
    // residual: x + aggregate = [1 + 2*3, 2 + 0]
    CHECK(t.value(out) == Matrix{{7}, {2}});
}

TEST_CASE("schnet interaction with no edges is the identity") {
    DisjointBatch d = tiny_disjoint(3, 2, {});
    d.node_matrix = Matrix{{1, 2}, {3, 4}, {5, 6}};
    d.edge_matrix = Matrix(0, 2);
    SchnetInteraction block;
    block.embed_in = identity_dense(2);
    block.filter_fn = pickoff_mlp(2, 0, 2);
    block.atomwise = pickoff_mlp(2, 0, 2);
    Tape t;
    CHECK(t.value(block.apply(t, t.constant(d.node_matrix), t.constant(*d.edge_matrix), d)) ==
          d.node_matrix);
}

TEST_CASE("schnet interaction matches the loop oracle") {
    Rng rng(505);
    GraphBatch g = oracles::random_batch(rng, {.max_graphs = 3, .node_width = 4, .edge_width = 5});
    DisjointBatch d = to_disjoint(g);
    SchnetInteraction block(4, 5, rng);

    Tape t;
    NodeId got = block.apply(t, t.constant(d.node_matrix), t.constant(*d.edge_matrix), d);

    Matrix embedded = oracles::dense_eval(block.embed_in, d.node_matrix);
    Matrix filters = oracles::mlp_eval(block.filter_fn, *d.edge_matrix);
    Matrix agg(d.num_nodes(), 4);
    for (Index k = 0; k < d.num_edges(); ++k) {
        const Edge& e = d.edge_index[static_cast<std::size_t>(k)];
        for (Index c = 0; c < 4; ++c) agg(e.receiver, c) += embedded(e.sender, c) * filters(k, c);
    }
    Matrix want = add(d.node_matrix, oracles::mlp_eval(block.atomwise, agg));
    CHECK(max_abs_diff(t.value(got), want) <= 1e-10);
}

TEST_CASE("megnet block identity pickoffs") {
    DisjointBatch d = tiny_disjoint(2, 1, {{0, 1}, {0, 0}});
    d.node_matrix = Matrix{{1}, {3}};
    d.edge_matrix = Matrix{{2}, {4}};
    Matrix state{{5}};

    MegnetBlock block;
    block.edge_fn = pickoff_mlp(4, 2, 3);    // e' = e
    block.node_fn = pickoff_mlp(3, 0, 1);    // h' = incoming mean
    block.state_fn = pickoff_mlp(3, 0, 2);   // u' = (edge mean, node mean)

    Tape t;
    auto out = block.apply(t, t.constant(d.node_matrix), t.constant(*d.edge_matrix),
                           t.constant(state), d);
    CHECK(t.value(out.edges) == *d.edge_matrix);
    CHECK(t.value(out.nodes) == Matrix{{3}, {0}});       // mean{2,4}=3 at node 0, none at node 1
    CHECK(t.value(out.state) == Matrix{{3, 1.5}});       // edge mean 3, node mean of h'= {3,0}
}

TEST_CASE("megnet block matches the loop oracle") {
    Rng rng(606);
    GraphBatch g = oracles::random_batch(
        rng, {.max_graphs = 3, .node_width = 2, .edge_width = 2, .state_width = 2});
    DisjointBatch d = to_disjoint(g);
    MegnetBlock block(2, 2, 2, rng);

    Tape t;
    auto out = block.apply(t, t.constant(d.node_matrix), t.constant(*d.edge_matrix),
                           t.constant(*d.state), d);

    const Index n = d.num_nodes(), m = d.num_edges(), b = d.num_graphs;
    Matrix edges(m, 2);
    for (Index k = 0; k < m; ++k) {
        const Edge& e = d.edge_index[static_cast<std::size_t>(k)];
        Matrix row(1, 8);
        for (Index c = 0; c < 2; ++c) {
            row(0, c) = d.node_matrix(e.receiver, c);
            row(0, 2 + c) = d.node_matrix(e.sender, c);
            row(0, 4 + c) = (*d.edge_matrix)(k, c);
            row(0, 6 + c) = (*d.state)(d.edge_graph_id[static_cast<std::size_t>(k)], c);
        }
        Matrix e_out = oracles::mlp_eval(block.edge_fn, row);
        for (Index c = 0; c < 2; ++c) edges(k, c) = e_out(0, c);
    }
    Matrix incoming = oracles::loop_segment_reduce(edges, edge_receivers(d), n, Reducer::Mean);
    Matrix nodes(n, 2);
    for (Index i = 0; i < n; ++i) {
        Matrix row(1, 6);
        for (Index c = 0; c < 2; ++c) {
            row(0, c) = incoming(i, c);
            row(0, 2 + c) = d.node_matrix(i, c);
            row(0, 4 + c) = (*d.state)(d.node_graph_id[static_cast<std::size_t>(i)], c);
        }
        Matrix h_out = oracles::mlp_eval(block.node_fn, row);
        for (Index c = 0; c < 2; ++c) nodes(i, c) = h_out(0, c);
    }
    Matrix edge_mean = oracles::loop_segment_reduce(edges, d.edge_graph_id, b, Reducer::Mean);
    Matrix node_mean = oracles::loop_segment_reduce(nodes, d.node_graph_id, b, Reducer::Mean);
    Matrix state(b, 2);
    for (Index gidx = 0; gidx < b; ++gidx) {
        Matrix row(1, 6);
        for (Index c = 0; c < 2; ++c) {
            row(0, c) = edge_mean(gidx, c);
            row(0, 2 + c) = node_mean(gidx, c);
            row(0, 4 + c) = (*d.state)(gidx, c);
        }
        Matrix u_out = oracles::mlp_eval(block.state_fn, row);
        for (Index c = 0; c < 2; ++c) state(gidx, c) = u_out(0, c);
    }
    CHECK(max_abs_diff(t.value(out.edges), edges) <= 1e-12);
    CHECK(max_abs_diff(t.value(out.nodes), nodes) <= 1e-12);
    CHECK(max_abs_diff(t.value(out.state), state) <= 1e-12);
}

TEST_CASE("readout_reduce examples") {
    std::vector<Index> ids{0, 0, 1};
    Matrix h{{1}, {3}, {5}};
    Tape t;
    CHECK(t.value(readout_reduce(t, t.constant(h), ids, 2, Reducer::Mean)) == Matrix{{2}, {5}});
    CHECK(t.value(readout_reduce(t, t.constant(h), ids, 2, Reducer::Sum)) == Matrix{{4}, {5}});

    // permuting nodes within a graph leaves the readout unchanged
    Matrix permuted{{3}, {1}, {5}};
    CHECK(t.value(readout_reduce(t, t.constant(permuted), ids, 2, Reducer::Mean)) ==
          Matrix{{2}, {5}});
}

TEST_CASE("set2set on singleton and identical-node graphs") {
    Rng rng(707);
    Set2Set s2s(3, 4, rng);

    SECTION("single node: the r-half is that node's features") {
        Matrix h{{0.3, -0.7, 1.1}};
        Tape t;
        Matrix out = t.value(s2s.apply(t, t.constant(h), {0}, 1));
        REQUIRE(out.cols() == 6);
        for (Index c = 0; c < 3; ++c) CHECK(out(0, 3 + c) == Catch::Approx(h(0, c)).margin(1e-14));
    }
    SECTION("two identical nodes: attention is uniform, r equals the feature") {
        Matrix h{{0.4, 0.2, -0.5}, {0.4, 0.2, -0.5}};
        Tape t;
        Matrix out = t.value(s2s.apply(t, t.constant(h), {0, 0}, 1));
        for (Index c = 0; c < 3; ++c) CHECK(out(0, 3 + c) == Catch::Approx(h(0, c)).margin(1e-14));
    }
    SECTION("permutation invariance on a random graph") {
        Matrix h = rng.normal_matrix(5, 3);
        Matrix perm(5, 3);
        std::vector<Index> order{3, 0, 4, 1, 2};
        for (Index i = 0; i < 5; ++i)
            for (Index c = 0; c < 3; ++c) perm(order[static_cast<std::size_t>(i)], c) = h(i, c);
        Tape t;
        Matrix a = t.value(s2s.apply(t, t.constant(h), {0, 0, 0, 0, 0}, 1));
        Matrix b = t.value(s2s.apply(t, t.constant(perm), {0, 0, 0, 0, 0}, 1));
        CHECK(max_abs_diff(a, b) <= 1e-12);
    }
}

TEST_CASE("topk pool on the documented example") {
    Rng rng(1);
    TopKPool pool(1, 2.0 / 3.0, rng);
    pool.projection = ad::Variable(Matrix{{1}});
    Matrix h{{2}, {1}, {3}};
    Tape t;
    TopKPoolOut out = pool.apply(t, t.constant(h), {0, 0, 0}, 1, {{0, 1}, {2, 0}, {1, 2}},
                                 {0, 0, 0});
    CHECK(out.kept == std::vector<Index>{2, 0});  // score order 3, 2
    Matrix got = t.value(out.values);
    CHECK(got(0, 0) == Catch::Approx(3.0 * std::tanh(3.0)).epsilon(1e-14));
    CHECK(got(1, 0) == Catch::Approx(2.0 * std::tanh(2.0)).epsilon(1e-14));
    // only the edge between kept nodes {2,0} survives; node 2 sits at
    // pooled row 0 and node 0 at pooled row 1
    REQUIRE(out.edges.size() == 1);
    CHECK(out.edges[0] == Edge{0, 1});
}

TEST_CASE("topk pool with ratio one keeps everything but still gates") {
    Rng rng(2);
    TopKPool pool(1, 1.0, rng);
    pool.projection = ad::Variable(Matrix{{2}});
    Matrix h{{1}, {2}};
    Tape t;
    TopKPoolOut out = pool.apply(t, t.constant(h), {0, 0}, 1, {}, {});
    REQUIRE(out.kept.size() == 2);
    CHECK(out.kept == std::vector<Index>{1, 0});
    Matrix got = t.value(out.values);
    CHECK(got(0, 0) == Catch::Approx(2.0 * std::tanh(2.0)).epsilon(1e-14));
    CHECK(got(1, 0) == Catch::Approx(1.0 * std::tanh(1.0)).epsilon(1e-14));
}

TEST_CASE("topk pool breaks ties toward the lower index") {
    Rng rng(3);
    TopKPool pool(1, 0.5, rng);
    pool.projection = ad::Variable(Matrix{{1}});
    Matrix h{{5}, {5}, {5}, {5}};
    Tape t;
    TopKPoolOut out = pool.apply(t, t.constant(h), {0, 0, 0, 0}, 1, {}, {});
    CHECK(out.kept == std::vector<Index>{0, 1});
}

TEST_CASE("topk pool rejects a zero projection") {
    Rng rng(4);
    TopKPool pool(2, 0.5, rng);
    pool.projection = ad::Variable(Matrix(2, 1));
    Tape t;
    CHECK_THROWS_AS(pool.apply(t, t.constant(Matrix(2, 2)), {0, 0}, 1, {}, {}), ContractError);
}

TEST_CASE("keep-set is invariant under positive scaling of the projection") {
    Rng rng(808);
    for (int it = 0; it < 20; ++it) {
        TopKPool pool(3, 0.5, rng);
        Matrix h = rng.normal_matrix(9, 3);
        std::vector<Index> ids{0, 0, 0, 0, 1, 1, 1, 1, 1};
        Tape t;
        auto kept1 = pool.apply(t, t.constant(h), ids, 2, {}, {}).kept;
        pool.projection.value = scale(pool.projection.value, 7.5);
        auto kept2 = pool.apply(t, t.constant(h), ids, 2, {}, {}).kept;
        CHECK(kept1 == kept2);
    }
}

TEST_CASE("unpool scatters kept rows back and zero-fills the rest") {
    Rng rng(5);
    TopKPool pool(1, 2.0 / 3.0, rng);
    pool.projection = ad::Variable(Matrix{{1}});
    Matrix h{{2}, {1}, {3}};
    Tape t;
    TopKPoolOut out = pool.apply(t, t.constant(h), {0, 0, 0}, 1, {}, {});
    Matrix restored = t.value(topk_unpool(t, out.values, out.kept, 3));
    CHECK(restored(0, 0) == Catch::Approx(2.0 * std::tanh(2.0)).epsilon(1e-14));
    CHECK(restored(1, 0) == 0.0);
    CHECK(restored(2, 0) == Catch::Approx(3.0 * std::tanh(3.0)).epsilon(1e-14));
}

TEST_CASE("unpool-after-pool preserves kept rows exactly") {
    Rng rng(909);
    TopKPool pool(2, 0.5, rng);
    Matrix h = rng.normal_matrix(8, 2);
    std::vector<Index> ids{0, 0, 0, 1, 1, 1, 1, 1};
    Tape t;
    TopKPoolOut out = pool.apply(t, t.constant(h), ids, 2, {}, {});
    Matrix pooled = t.value(out.values);
    Matrix restored = t.value(topk_unpool(t, out.values, out.kept, 8));
    for (std::size_t r = 0; r < out.kept.size(); ++r)
        for (Index c = 0; c < 2; ++c)
            CHECK(restored(out.kept[r], c) == pooled(static_cast<Index>(r), c));
    CHECK_THROWS_AS(topk_unpool(t, out.values, {0, 1, 2}, 8), ValidationError);
}

TEST_CASE("every layer fixture passes grad_check at 1e-4") {
    for (const auto& name : gradcheck_layer_names()) {
        INFO("layer " << name);
        CHECK(gradcheck_layer(name, 0) <= 1e-4);
    }
    CHECK_THROWS_AS(gradcheck_layer("nope", 0), ConfigError);
}
