// SPDX-FileCopyrightText: Copyright (c) 2026 raggednn authors
// SPDX-License-Identifier: Apache-2.0
//
// Single-binary command line: train, eval, gradcheck, convert, bench.
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
// stdout carries machine-parseable JSON/CSV; prose goes to stderr.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "raggednn/raggednn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace raggednn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed) {
    if (explicit_seed) return *explicit_seed;
    if (const char* env = std::getenv("RAGGEDNN_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("RAGGEDNN_SEED: not an integer: '" + std::string(env) + "'");
        }
    }
    return 0;
}

json load_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw ConfigError(std::string(what) + ": cannot open '" + path + "'");
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string(what) + " '" + path + "': " + e.what());
    }
}

// ---------------------------------------------------------------- train

struct RunConfig {
    json model_spec_json;                 // inline object (path already resolved)
    bool spec_has_seed = false;
    std::string dataset;                  // JSONL path
    std::string dataset_nodes, dataset_edges;  // citation TSV paths
    std::array<double, 3> split{0.8, 0.1, 0.1};
    std::optional<std::uint64_t> seed;
    Index batch_size = 32;
    Index epochs = 10;
    OptimizerConfig optimizer;
    std::string output_dir;
    std::string loss;                     // "" = default by task
    std::vector<std::string> target_names;
    std::optional<double> expand_cutoff;
    BasisSpec basis;
    bool write_splits = false;
};

RunConfig parse_run_config(const json& j, const std::string& config_dir) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    RunConfig cfg;
    auto resolve = [&](const std::string& p) {
        return fs::path(p).is_absolute() ? p : (fs::path(config_dir) / p).string();
    };
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "model_spec") {
                if (value.is_string()) {
                    const std::string path = resolve(value.get<std::string>());
                    cfg.model_spec_json = load_json_file(path, "model_spec");
                } else {
                    cfg.model_spec_json = value;
                }
                cfg.spec_has_seed = cfg.model_spec_json.contains("seed");
            } else if (key == "dataset")
                cfg.dataset = resolve(value.get<std::string>());
            else if (key == "dataset_nodes")
                cfg.dataset_nodes = resolve(value.get<std::string>());
            else if (key == "dataset_edges")
                cfg.dataset_edges = resolve(value.get<std::string>());
            else if (key == "split")
                cfg.split = value.get<std::array<double, 3>>();
            else if (key == "seed")
                cfg.seed = value.get<std::uint64_t>();
            else if (key == "batch_size")
                cfg.batch_size = value.get<Index>();
            else if (key == "epochs")
                cfg.epochs = value.get<Index>();
            else if (key == "output_dir")
                cfg.output_dir = resolve(value.get<std::string>());
            else if (key == "loss")
                cfg.loss = value.get<std::string>();
            else if (key == "target_names")
                cfg.target_names = value.get<std::vector<std::string>>();
            else if (key == "write_splits")
                cfg.write_splits = value.get<bool>();
            else if (key == "optimizer") {
                for (const auto& [okey, ovalue] : value.items()) {
                    if (okey == "kind")
                        cfg.optimizer.kind = ovalue.get<std::string>();
                    else if (okey == "lr")
                        cfg.optimizer.lr = ovalue.get<double>();
                    else if (okey == "beta1")
                        cfg.optimizer.beta1 = ovalue.get<double>();
                    else if (okey == "beta2")
                        cfg.optimizer.beta2 = ovalue.get<double>();
                    else if (okey == "epsilon")
                        cfg.optimizer.epsilon = ovalue.get<double>();
                    else
                        throw ConfigError("config: unknown optimizer field '" + okey + "'");
                }
            } else if (key == "expand_distances") {
                for (const auto& [ekey, evalue] : value.items()) {
                    if (ekey == "cutoff")
                        cfg.expand_cutoff = evalue.get<double>();
                    else if (ekey == "count")
                        cfg.basis.count = evalue.get<Index>();
                    else if (ekey == "gamma")
                        cfg.basis.gamma = evalue.get<double>();
                    else if (ekey == "r_max")
                        cfg.basis.r_max = evalue.get<double>();
                    else
                        throw ConfigError("config: unknown expand_distances field '" + ekey + "'");
                }
                if (!cfg.expand_cutoff)
                    throw ConfigError("config: expand_distances needs a cutoff");
            } else {
                throw ConfigError("config: unknown field '" + key + "'");
            }
        } catch (const json::exception& e) {
            throw ConfigError("config: bad value for '" + key + "': " + e.what());
        }
    }
    return cfg;
}

struct LoadedData {
    DatasetSpec spec;
    std::vector<GraphRecord> records;
};

LoadedData load_configured_dataset(const RunConfig& cfg) {
    LoadedData data;
    if (!cfg.dataset.empty()) {
        if (!fs::exists(cfg.dataset))
            throw ConfigError("dataset: no such file '" + cfg.dataset + "'");
        auto [spec, records] = load_jsonl_dataset(cfg.dataset);
        data.spec = std::move(spec);
        data.records = std::move(records);
    } else if (!cfg.dataset_nodes.empty()) {
        if (!fs::exists(cfg.dataset_nodes))
            throw ConfigError("dataset_nodes: no such file '" + cfg.dataset_nodes + "'");
        if (!fs::exists(cfg.dataset_edges))
            throw ConfigError("dataset_edges: no such file '" + cfg.dataset_edges + "'");
        auto [spec, record] = load_citation_dataset(cfg.dataset_nodes, cfg.dataset_edges);
        data.spec = std::move(spec);
        data.records.push_back(std::move(record));
    } else {
        throw ConfigError("config: set either 'dataset' or 'dataset_nodes'+'dataset_edges'");
    }
    if (cfg.expand_cutoff) {
        for (auto& rec : data.records) rec = expand_distances(rec, *cfg.expand_cutoff, cfg.basis);
        data.spec.edge_width = cfg.basis.count;
    }
    if (!cfg.target_names.empty()) {
        if (static_cast<Index>(cfg.target_names.size()) != data.spec.num_targets &&
            data.spec.task == Task::GraphRegression)
            throw ConfigError("target_names: " + std::to_string(cfg.target_names.size()) +
                              " names for " + std::to_string(data.spec.num_targets) + " targets");
        data.spec.target_names = cfg.target_names;
    }
    return data;
}

/// Fill widths the spec leaves unset (0) from the dataset.
void complete_model_spec(ModelSpec& spec, const DatasetSpec& dspec) {
    if (spec.task.empty()) spec.task = task_to_string(dspec.task);
    if (spec.node_input == 0) spec.node_input = dspec.node_width;
    if (spec.edge_input == 0) spec.edge_input = dspec.edge_width;
    if (spec.state_input == 0) spec.state_input = dspec.state_width;
    if (spec.output == 0)
        spec.output = is_graph_task(dspec.task) && dspec.task == Task::GraphRegression
                          ? dspec.num_targets
                          : dspec.num_classes;
    if (task_from_string(spec.task) != dspec.task)
        throw ConfigError("task: model spec says '" + spec.task + "' but the dataset is '" +
                          task_to_string(dspec.task) + "'");
}

Checkpoint snapshot(Model& model, const Optimizer& opt, const std::string& rng_state,
                    const std::vector<std::string>& target_names) {
    Checkpoint ckpt;
    ckpt.model_spec = model.spec();
    for (const auto& p : model.parameters()) ckpt.params.emplace_back(p.name, p.var->value);
    ckpt.opt_config = opt.state().config;
    ckpt.opt_step = opt.state().step;
    const auto& prefs = opt.params();
    for (std::size_t i = 0; i < prefs.size(); ++i) {
        ckpt.opt_first_moment.emplace_back(prefs[i].name, opt.state().first_moment[i]);
        ckpt.opt_second_moment.emplace_back(prefs[i].name, opt.state().second_moment[i]);
    }
    ckpt.rng_state = rng_state;
    ckpt.target_names = target_names;
    return ckpt;
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
              std::optional<Index> epochs_flag, std::optional<Index> batch_flag,
              std::optional<double> lr_flag, std::optional<std::string> outdir_flag) {
    json config_json = load_json_file(config_path, "config");
    RunConfig cfg = parse_run_config(config_json, fs::path(config_path).parent_path().string());
    if (seed_flag) cfg.seed = *seed_flag;
    if (epochs_flag) cfg.epochs = *epochs_flag;
    if (batch_flag) cfg.batch_size = *batch_flag;
    if (lr_flag) cfg.optimizer.lr = *lr_flag;
    if (outdir_flag) cfg.output_dir = *outdir_flag;
    if (cfg.output_dir.empty()) throw ConfigError("config: output_dir is required");
    if (cfg.epochs < 0) throw ConfigError("epochs: must be >= 0");
    const std::uint64_t seed = resolve_seed(cfg.seed);

    LoadedData data = load_configured_dataset(cfg);
    Rng run_rng(seed);
    auto [train_recs, val_recs, test_recs] =
        split_dataset(data.records, cfg.split, run_rng.next_u64());
    if (train_recs.empty()) throw ConfigError("split: training split is empty");

    ModelSpec mspec = model_spec_from_json(cfg.model_spec_json);
    if (!cfg.spec_has_seed) mspec.seed = seed;
    complete_model_spec(mspec, data.spec);
    auto model = build_model(mspec);
    Optimizer opt(cfg.optimizer, model->parameters());
    const LossKind loss_kind =
        cfg.loss.empty() ? default_loss(data.spec.task) : loss_from_string(cfg.loss);

    auto train_batches = batch_graphs(train_recs, cfg.batch_size, true, run_rng.next_u64());
    auto val_batches = val_recs.empty() ? std::vector<TrainingBatch>{}
                                        : batch_graphs(val_recs, cfg.batch_size, false);

    fs::create_directories(cfg.output_dir);
    if (cfg.write_splits) {
        write_jsonl_dataset((fs::path(cfg.output_dir) / "train.jsonl").string(), train_recs);
        if (!val_recs.empty())
            write_jsonl_dataset((fs::path(cfg.output_dir) / "val.jsonl").string(), val_recs);
        if (!test_recs.empty())
            write_jsonl_dataset((fs::path(cfg.output_dir) / "test.jsonl").string(), test_recs);
    }
    std::ofstream metrics_out(fs::path(cfg.output_dir) / "metrics.jsonl");
    if (!metrics_out) throw ConfigError("output_dir: cannot write to '" + cfg.output_dir + "'");

    for (Index epoch = 1; epoch <= cfg.epochs; ++epoch) {
        EpochResult r = train_epoch(*model, train_batches, loss_kind, opt,
                                    data.spec.target_names);
        json metric = r.metric;
        if (!val_batches.empty())
            for (const auto& [k, v] : evaluate(*model, val_batches, data.spec))
                metric["val_" + k] = v;
        json line{{"epoch", epoch}, {"loss", r.loss}, {"metric", metric}};
        metrics_out << line.dump() << "\n";
        std::cerr << "epoch " << epoch << "/" << cfg.epochs << " loss " << r.loss << "\n";
    }
    metrics_out.flush();

    save_checkpoint((fs::path(cfg.output_dir) / "final.ckpt").string(),
                    snapshot(*model, opt, run_rng.serialize_state(), data.spec.target_names));
    std::cerr << "wrote " << (fs::path(cfg.output_dir) / "final.ckpt").string() << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- eval

int cmd_eval(const std::string& ckpt_path, const std::string& data_path, Index batch_size) {
    if (!fs::exists(ckpt_path)) throw ConfigError("ckpt: no such file '" + ckpt_path + "'");
    if (!fs::exists(data_path)) throw ConfigError("data: no such file '" + data_path + "'");
    Checkpoint ckpt;
    try {
        ckpt = load_checkpoint(ckpt_path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    auto model = build_model(ckpt.model_spec);
    restore_params(ckpt.params, model->parameters());

    auto [dspec, records] = load_jsonl_dataset(data_path);
    if (records.empty()) throw ConfigError("data: no graphs in '" + data_path + "'");
    if (task_from_string(ckpt.model_spec.task) != dspec.task)
        throw ConfigError("data: task '" + task_to_string(dspec.task) +
                          "' does not match checkpoint task '" + ckpt.model_spec.task + "'");
    if (dspec.task == Task::GraphRegression) {
        if (dspec.num_targets != ckpt.model_spec.output)
            throw ConfigError("data: " + std::to_string(dspec.num_targets) +
                              " targets but the model emits " +
                              std::to_string(ckpt.model_spec.output));
    } else if (dspec.num_classes > ckpt.model_spec.output) {
        throw ConfigError("data: labels reach class " + std::to_string(dspec.num_classes - 1) +
                          " but the model emits " + std::to_string(ckpt.model_spec.output));
    }
    if (!ckpt.target_names.empty()) dspec.target_names = ckpt.target_names;

    Metrics m = evaluate(*model, batch_graphs(records, batch_size, false), dspec);
    std::cout << json(m).dump() << "\n";
    return kExitOk;
}

// ------------------------------------------------------------- gradcheck

int cmd_gradcheck(const std::string& layer, std::optional<std::uint64_t> seed_flag) {
    const std::uint64_t seed = resolve_seed(seed_flag);
    std::vector<std::string> names;
    if (layer == "all")
        names = gradcheck_layer_names();
    else
        names.push_back(layer);

    bool all_pass = true;
    for (const auto& name : names) {
        const double err = gradcheck_layer(name, seed);  // ConfigError on bad name
        const bool pass = err <= 1e-4;
        all_pass = all_pass && pass;
        std::cout << json{{"layer", name}, {"max_rel_error", err}, {"pass", pass}}.dump() << "\n";
    }
    return all_pass ? kExitOk : kExitRuntime;
}

// --------------------------------------------------------------- convert

int cmd_convert(const std::string& in_path, Index batch_size, bool report) {
    if (!fs::exists(in_path)) throw ConfigError("in: no such file '" + in_path + "'");
    auto [dspec, records] = load_jsonl_dataset(in_path);
    auto batches = batch_graphs(records, batch_size, false);

    Index total_padded = 0, total_ragged = 0;
    Index batch_index = 0;
    for (const auto& b : batches) {
        const Ragged& nodes = b.graphs.nodes;
        Index n_max = 0, m_max = 0;
        for (Index g = 0; g < b.num_graphs(); ++g) {
            n_max = std::max(n_max, nodes.row_count(g));
            m_max = std::max(m_max, b.graphs.edge_index.row_count(g));
        }
        const Index padded_nodes = b.num_graphs() * n_max;
        const Index padded_edges = b.num_graphs() * m_max;
        const Index ragged_nodes = nodes.total_rows();
        const Index ragged_edges = b.graphs.edge_index.total_rows();
        total_padded += padded_nodes;
        total_ragged += ragged_nodes;
        if (report) {
            json line{{"batch", batch_index},
                      {"graphs", b.num_graphs()},
                      {"nodes", ragged_nodes},
                      {"edges", ragged_edges},
                      {"padded_node_cells", padded_nodes},
                      {"ragged_node_cells", ragged_nodes},
                      {"padded_edge_cells", padded_edges},
                      {"ragged_edge_cells", ragged_edges},
                      {"overhead", ragged_nodes > 0
                                       ? static_cast<double>(padded_nodes) / ragged_nodes
                                       : 1.0}};
            std::cout << line.dump() << "\n";
        }
        ++batch_index;
    }
    json summary{{"batches", static_cast<Index>(batches.size())},
                 {"graphs", static_cast<Index>(records.size())},
                 {"padded_node_cells", total_padded},
                 {"ragged_node_cells", total_ragged},
                 {"overhead",
                  total_ragged > 0 ? static_cast<double>(total_padded) / total_ragged : 1.0}};
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- bench

Matrix naive_segment_loop(const Matrix& values, const std::vector<Index>& ids, Index segments,
                          Reducer reducer) {
    Matrix out(segments, values.cols());
    for (Index s = 0; s < segments; ++s) {
        Index count = 0;
        for (Index r = 0; r < values.rows(); ++r) {
            if (ids[static_cast<std::size_t>(r)] != s) continue;
            ++count;
            for (Index c = 0; c < values.cols(); ++c) {
                if (reducer == Reducer::Max)
                    out(s, c) = count == 1 ? values(r, c) : std::max(out(s, c), values(r, c));
                else
                    out(s, c) += values(r, c);
            }
        }
        if (reducer == Reducer::Mean && count > 0)
            for (Index c = 0; c < values.cols(); ++c) out(s, c) /= static_cast<double>(count);
    }
    return out;
}

int cmd_bench(const std::string& kernel, const std::string& sizes_csv, Index reps, Index width) {
    if (reps <= 0) throw ConfigError("reps: must be positive");
    if (kernel != "segment_sum" && kernel != "segment_mean" && kernel != "segment_max" &&
        kernel != "gather")
        throw ConfigError("kernel: unknown '" + kernel +
                          "' (segment_sum|segment_mean|segment_max|gather)");
    std::vector<Index> sizes;
    {
        std::stringstream ss(sizes_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) sizes.push_back(std::stoll(tok));
        if (sizes.empty()) throw ConfigError("sizes: empty list");
    }

    std::cout << "kernel,size,reps,ns_per_op,baseline_ns_per_op\n";
    Rng rng(0);
    for (Index size : sizes) {
        const Index segments = std::max<Index>(1, size / 16);
        Matrix values = rng.normal_matrix(size, width);
        std::vector<Index> ids(static_cast<std::size_t>(size));
        for (auto& id : ids) id = rng.uniform_index(segments);

        Reducer reducer = kernel == "segment_mean"
                              ? Reducer::Mean
                              : (kernel == "segment_max" ? Reducer::Max : Reducer::Sum);

        // correctness before timing
        if (kernel == "gather") {
            Matrix got = gather_rows(values, ids);
            for (Index r = 0; r < got.rows(); ++r)
                for (Index c = 0; c < width; ++c)
                    if (got(r, c) != values(ids[static_cast<std::size_t>(r)], c))
                        throw NumericError("bench: gather self-check failed");
        } else {
            Matrix fast = segment_reduce(values, ids, segments, reducer);
            Matrix slow = naive_segment_loop(values, ids, segments, reducer);
            if (max_abs_diff(fast, slow) > 1e-12)
                throw NumericError("bench: kernel and baseline disagree");
        }

        auto time_ns = [&](auto&& fn) {
            const auto start = std::chrono::steady_clock::now();
            for (Index r = 0; r < reps; ++r) fn();
            const auto stop = std::chrono::steady_clock::now();
            return static_cast<double>(
                       std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()) /
                   static_cast<double>(reps);
        };

        double fast_ns, slow_ns;
        if (kernel == "gather") {
            fast_ns = time_ns([&] { gather_rows(values, ids); });
            slow_ns = time_ns([&] {
                Matrix out(static_cast<Index>(ids.size()), width);
                for (std::size_t k = 0; k < ids.size(); ++k)
                    for (Index c = 0; c < width; ++c)
                        out(static_cast<Index>(k), c) = values(ids[k], c);
                return out;
            });
        } else {
            fast_ns = time_ns([&] { segment_reduce(values, ids, segments, reducer); });
            slow_ns = time_ns([&] { naive_segment_loop(values, ids, segments, reducer); });
        }
        std::cout << kernel << "," << size << "," << reps << "," << fast_ns << "," << slow_ns
                  << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ragged graph neural network toolkit"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "train a model from a JSON run config");
    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<Index> epochs_flag, batch_flag;
    std::optional<double> lr_flag;
    std::optional<std::string> outdir_flag;
    train->add_option("--config", config_path, "run config JSON")->required();
    train->add_option("--seed", seed_flag, "override config seed");
    train->add_option("--epochs", epochs_flag, "override epoch count");
    train->add_option("--batch-size", batch_flag, "override batch size");
    train->add_option("--lr", lr_flag, "override learning rate");
    train->add_option("--output-dir", outdir_flag, "override output directory");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a JSONL dataset");
    std::string ckpt_path, data_path;
    Index eval_batch = 32;
    eval->add_option("--ckpt", ckpt_path, "checkpoint file")->required();
    eval->add_option("--data", data_path, "JSONL dataset")->required();
    eval->add_option("--batch-size", eval_batch, "evaluation batch size");

    // gradcheck
    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of a layer");
    std::string layer;
    std::optional<std::uint64_t> gc_seed;
    gradcheck->add_option("--layer", layer, "layer name or 'all'")->required();
    gradcheck->add_option("--seed", gc_seed, "fixture seed");

    // convert
    auto* convert = app.add_subcommand("convert", "report ragged vs padded representation stats");
    std::string in_path;
    Index conv_batch = 32;
    bool report = false;
    convert->add_option("--in", in_path, "JSONL dataset")->required();
    convert->add_option("--batch-size", conv_batch, "batch size for the report");
    convert->add_flag("--report", report, "print per-batch statistics");

    // bench
    auto* bench = app.add_subcommand("bench", "time segment kernels against a naive loop");
    std::string kernel = "segment_sum";
    std::string sizes = "1000,10000,100000";
    Index reps = 50, bench_width = 8;
    bench->add_option("--kernel", kernel, "segment_sum|segment_mean|segment_max|gather");
    bench->add_option("--sizes", sizes, "comma-separated row counts");
    bench->add_option("--reps", reps, "repetitions per measurement");
    bench->add_option("--width", bench_width, "feature width");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*train)
            return cmd_train(config_path, seed_flag, epochs_flag, batch_flag, lr_flag, outdir_flag);
        if (*eval) return cmd_eval(ckpt_path, data_path, eval_batch);
        if (*gradcheck) return cmd_gradcheck(layer, gc_seed);
        if (*convert) return cmd_convert(in_path, conv_batch, report);
        if (*bench) return cmd_bench(kernel, sizes, reps, bench_width);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
