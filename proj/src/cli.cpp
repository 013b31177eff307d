// Copyright 2026-present the cbvrp project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cbvrp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>

#include "cbvrp/datamodel.hpp"
#include "cbvrp/error.hpp"
#include "cbvrp/kernels.hpp"
#include "cbvrp/metrics.hpp"
#include "cbvrp/parallel.hpp"
#include "cbvrp/retrieval.hpp"
#include "cbvrp/synth.hpp"
#include "cbvrp/trainer.hpp"

namespace cbvrp::cli {

namespace {

namespace fs = std::filesystem;

// Bad flag values that only show up after parsing. Exit code 2.
class UsageError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

struct TrainOptions {
    TrainConfig config;

    // A sweep supplies dim and epochs from its grid instead.
    void
    add_to(CLI::App& app, bool with_shape = true) {
        if (with_shape) {
            app.add_option("--dim", config.embed_dim, "Embedding dimension d")->capture_default_str();
            app.add_option("--epochs", config.epochs, "Training epochs")->capture_default_str();
        }
        app.add_option("--margin", config.margin, "Triplet margin m")->capture_default_str();
        app.add_option("--lr", config.learning_rate, "SGD learning rate")->capture_default_str();
        app.add_option("--triplets-per-anchor", config.triplets_per_anchor,
                       "Triplets sampled per anchor each epoch")
            ->capture_default_str();
        app.add_option("--batch-size", config.batch_size, "Triplets per SGD step")
            ->capture_default_str();
        app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
    }
};

struct SynthOptions {
    SynthConfig config;
    std::string out;
};

struct TrainCommand {
    std::string features;
    std::string truth;
    std::string candidates;
    std::string out;
    TrainOptions train;
};

struct PredictCommand {
    std::string features;
    std::string model;
    std::string metric = "cosine";
    std::string queries;
    std::string candidates;
    std::size_t k = 300;
    bool keep_self = false;
    std::string out;
    std::string sim_out;
};

struct FuseCommand {
    std::vector<std::string> sims;
    std::vector<double> weights;
    std::size_t k = 300;
    bool keep_self = false;
    std::string out;
    std::string sim_out;
};

struct EvalCommand {
    std::string truth;
    std::string candidates;
    std::string pred;
    std::vector<std::size_t> k_hit = kDefaultHitGrid;
    std::vector<std::size_t> k_recall = kDefaultRecallGrid;
    std::string out;
};

struct SweepCommand {
    std::string features;
    std::string truth;
    std::string train_candidates;
    std::string eval_truth;
    std::string eval_candidates;
    std::vector<std::size_t> dims{64, 128, 256};
    std::vector<std::size_t> epochs{4, 8, 16};
    std::string metric = "cosine";
    std::vector<std::size_t> k_hit = kDefaultHitGrid;
    std::vector<std::size_t> k_recall = kDefaultRecallGrid;
    bool keep_self = false;
    std::string out;
    TrainOptions train;
};

std::optional<fs::path>
optional_path(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return fs::path(s);
}

FeatureSet
load_pooled(const std::string& path) {
    auto set = load_features(path);
    return set.pooled() ? std::move(set) : mean_pool(set);
}

std::vector<ItemId>
ids_or_all(const std::string& path, const FeatureSet& features) {
    return path.empty() ? features.ids() : load_candidates(path);
}

std::size_t
max_k(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::size_t k = 1;
    for (auto v : a) {
        k = std::max(k, v);
    }
    for (auto v : b) {
        k = std::max(k, v);
    }
    return k;
}

void
check_grid(const std::vector<std::size_t>& grid, const char* name) {
    if (grid.empty()) {
        throw UsageError(std::string(name) + " must not be empty");
    }
    for (auto v : grid) {
        if (v == 0) {
            throw UsageError(std::string(name) + " values must be positive");
        }
    }
}

void
check_train(const TrainConfig& config) {
    try {
        config.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

// --- subcommands -----------------------------------------------------------

int
cmd_synth(const SynthOptions& opt, std::ostream& out) {
    try {
        opt.config.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const auto data = generate(opt.config);
    write_dataset(data, opt.out);
    out << "wrote " << data.channels.size() << " channels x " << opt.config.n_items
        << " items to " << opt.out << " (train " << data.ids_in(Split::train).size() << ", val "
        << data.ids_in(Split::val).size() << ", test " << data.ids_in(Split::test).size()
        << ")\n";
    return kExitOk;
}

int
cmd_train(const TrainCommand& opt, std::ostream& out) {
    check_train(opt.train.config);
    const auto features = load_pooled(opt.features);
    const auto truth = load_relevance(opt.truth, optional_path(opt.candidates));
    const auto result = train(truth, features, opt.train.config);
    save_model(result.model, opt.out);
    for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
        out << "epoch " << e << " mean_loss=" << result.loss_history[e] << "\n";
    }
    if (result.skipped_anchors != 0) {
        out << "warning: " << result.skipped_anchors << " anchors had no valid negative\n";
    }
    out << "wrote model " << result.model.embed_dim() << "x" << result.model.input_dim() << " to "
        << opt.out << "\n";
    return kExitOk;
}

int
cmd_predict(const PredictCommand& opt, std::ostream& out) {
    SimilarityMetric metric{};
    try {
        metric = parse_similarity_metric(opt.metric);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (opt.k == 0) {
        throw UsageError("--k must be positive");
    }
    auto features = load_pooled(opt.features);
    if (!opt.model.empty()) {
        features = embed(load_model(opt.model), features);
    }
    const auto query_ids = ids_or_all(opt.queries, features);
    const auto cand_ids = ids_or_all(opt.candidates, features);
    const auto matrix = similarity_matrix(select_items(features, query_ids),
                                          select_items(features, cand_ids), metric);
    if (!opt.sim_out.empty()) {
        save_similarity(matrix, opt.sim_out);
    }
    save_lists(top_k(matrix, opt.k, !opt.keep_self).lists, opt.out);
    out << "ranked " << matrix.rows() << " queries against " << matrix.cols()
        << " candidates (" << similarity_metric_name(metric) << ", kernels "
        << kernels::active().name << ")\n";
    return kExitOk;
}

int
cmd_fuse(const FuseCommand& opt, std::ostream& out) {
    if (opt.sims.size() < 2) {
        throw UsageError("fuse needs at least two --sim inputs");
    }
    if (opt.out.empty() && opt.sim_out.empty()) {
        throw UsageError("fuse needs --out and/or --sim-out");
    }
    if (opt.k == 0) {
        throw UsageError("--k must be positive");
    }
    std::vector<SimilarityMatrix> matrices;
    for (const auto& path : opt.sims) {
        matrices.push_back(load_similarity(path));
    }
    const auto fused = fuse(matrices, opt.weights);
    if (!opt.sim_out.empty()) {
        save_similarity(fused, opt.sim_out);
    }
    if (!opt.out.empty()) {
        save_lists(top_k(fused, opt.k, !opt.keep_self).lists, opt.out);
    }
    out << "fused " << matrices.size() << " matrices (" << fused.rows() << "x" << fused.cols()
        << ")\n";
    return kExitOk;
}

int
cmd_eval(const EvalCommand& opt, std::ostream& out) {
    check_grid(opt.k_hit, "--k-hit");
    check_grid(opt.k_recall, "--k-recall");
    const auto truth = load_relevance(opt.truth, optional_path(opt.candidates));
    const auto pred = load_predictions(opt.pred);
    const auto report = evaluate(truth, pred, opt.k_hit, opt.k_recall);
    out << format_report_table(report) << "\n" << format_report_kv(report);
    if (!opt.out.empty()) {
        write_file(opt.out, format_report_kv(report));
    }
    return kExitOk;
}

int
cmd_sweep(const SweepCommand& opt, std::ostream& out, std::ostream& err) {
    check_grid(opt.dims, "--dims");
    check_grid(opt.k_hit, "--k-hit");
    check_grid(opt.k_recall, "--k-recall");
    if (opt.epochs.empty()) {
        throw UsageError("--epochs must not be empty");
    }
    check_train(opt.train.config);
    SimilarityMetric metric{};
    try {
        metric = parse_similarity_metric(opt.metric);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    const auto features = load_pooled(opt.features);
    const auto train_truth = load_relevance(opt.truth, optional_path(opt.train_candidates));
    const auto eval_truth = load_relevance(opt.eval_truth, optional_path(opt.eval_candidates));
    std::vector<ItemId> query_ids;
    for (const auto& [query, list] : eval_truth.lists.entries()) {
        query_ids.push_back(query);
    }
    const std::size_t k = max_k(opt.k_hit, opt.k_recall);

    std::vector<SweepRow> rows;
    for (auto dim : opt.dims) {
        for (auto epochs : opt.epochs) {
            auto config = opt.train.config;
            config.embed_dim = dim;
            config.epochs = epochs;
            const auto result = train(train_truth, features, config);
            const auto embedded = embed(result.model, features);
            const auto matrix =
                similarity_matrix(select_items(embedded, query_ids),
                                  select_items(embedded, eval_truth.candidate_ids), metric);
            const auto pred = top_k(matrix, k, !opt.keep_self);
            rows.push_back(SweepRow{dim, epochs, evaluate(eval_truth, pred, opt.k_hit, opt.k_recall)});
            err << "sweep: dim=" << dim << " epochs=" << epochs << " done\n";
        }
    }
    const auto table = format_sweep_table(rows);
    out << table;
    if (!opt.out.empty()) {
        write_file(opt.out, table);
    }
    return kExitOk;
}

// --- config files ------------------------------------------------------------

struct ConfigEntry {
    std::string key;
    std::string value;
};

std::string
trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<ConfigEntry>
parse_config_file(const std::string& path) {
    const auto text = read_file(path);
    std::vector<ConfigEntry> entries;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        entries.push_back({trim(std::string_view(t).substr(0, eq)),
                           trim(std::string_view(t).substr(eq + 1))});
    }
    return entries;
}

bool
has_flag(const std::vector<std::string>& args, const std::string& key) {
    const auto flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

// Expands `--config FILE` into `--key=value` arguments for every key not
// already given on the command line.
std::vector<std::string>
expand_config(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (config_path.empty() || args.empty()) {
        return args;
    }
    std::vector<std::string> injected;
    for (const auto& [key, value] : parse_config_file(config_path)) {
        if (key.empty() || key == "config") {
            throw UsageError("invalid config key '" + key + "'");
        }
        if (!has_flag(args, key)) {
            injected.push_back("--" + key + "=" + value);
        }
    }
    args.insert(args.begin() + 1, injected.begin(), injected.end());
    return args;
}

void
echo_config(const CLI::App& sub, std::ostream& err) {
    err << kConfigBegin << " (" << sub.get_name() << ")\n";
    for (const auto* opt : sub.get_options()) {
        const auto& names = opt->get_lnames();
        if (names.empty() || names.front() == "help" || names.front() == "config") {
            continue;
        }
        std::string value;
        if (!opt->results().empty()) {
            for (std::size_t i = 0; i < opt->results().size(); ++i) {
                value += (i == 0 ? "" : ",") + opt->results()[i];
            }
        } else {
            value = opt->get_default_str();
            if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
                value = value.substr(1, value.size() - 2);
            }
        }
        if (!value.empty()) {
            err << names.front() << "=" << value << "\n";
        }
    }
    err << kConfigEnd << "\n";
}

}  // namespace

int
run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Content-based video relevance toolkit: triplet embeddings, top-K ranking, "
                 "late fusion and recall/hit evaluation."};
    app.name("cbvrp");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");
    app.footer(std::string("Environment: ") + kThreadsEnv + " caps worker threads, " +
               kernels::kSimdEnv + " forces scalar|avx2|neon kernels.");

    auto add_config = [](CLI::App* sub) {
        sub->add_option("--config", "key=value file; command-line flags win");
    };

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a planted-cluster dataset");
    synth_cmd->add_option("--out", synth.out, "Output directory")->required();
    synth_cmd->add_option("--seed", synth.config.seed)->capture_default_str();
    synth_cmd->add_option("--n-items", synth.config.n_items)->capture_default_str();
    synth_cmd->add_option("--n-clusters", synth.config.n_clusters)->capture_default_str();
    synth_cmd->add_option("--raw-dim", synth.config.raw_dim)->capture_default_str();
    synth_cmd->add_option("--latent-dim", synth.config.latent_dim)->capture_default_str();
    synth_cmd->add_option("--n-channels", synth.config.n_channels)->capture_default_str();
    synth_cmd->add_option("--noise-sigma", synth.config.noise_sigma)->capture_default_str();
    synth_cmd->add_option("--truth-len", synth.config.truth_len, "Ground-truth list length M")
        ->capture_default_str();
    add_config(synth_cmd);

    TrainCommand train_opt;
    auto* train_cmd = app.add_subcommand("train", "Train a linear triplet embedding");
    train_cmd->add_option("--features", train_opt.features, ".cbvf/.cbvt features")->required();
    train_cmd->add_option("--truth", train_opt.truth, ".rel training lists")->required();
    train_cmd->add_option("--candidates", train_opt.candidates, ".cand negative pool");
    train_cmd->add_option("--out", train_opt.out, ".cbvm model path")->required();
    train_opt.train.add_to(*train_cmd);
    add_config(train_cmd);

    PredictCommand predict_opt;
    auto* predict_cmd = app.add_subcommand("predict", "Rank candidates for every query");
    predict_cmd->add_option("--features", predict_opt.features)->required();
    predict_cmd->add_option("--model", predict_opt.model, "Embed through a .cbvm model first");
    predict_cmd->add_option("--metric", predict_opt.metric, "cosine | neg-euclidean")
        ->capture_default_str();
    predict_cmd->add_option("--queries", predict_opt.queries, ".cand query ids (default: all)");
    predict_cmd->add_option("--candidates", predict_opt.candidates,
                            ".cand candidate ids (default: all)");
    predict_cmd->add_option("--k", predict_opt.k, "Prediction list length")->capture_default_str();
    predict_cmd->add_flag("--keep-self", predict_opt.keep_self, "Allow a query to retrieve itself")
        ->default_str("false");
    predict_cmd->add_option("--out", predict_opt.out, ".pred output")->required();
    predict_cmd->add_option("--sim-out", predict_opt.sim_out, ".cbvs similarity dump");
    add_config(predict_cmd);

    FuseCommand fuse_opt;
    auto* fuse_cmd = app.add_subcommand("fuse", "Late fusion of similarity matrices");
    fuse_cmd->add_option("--sim", fuse_opt.sims, ".cbvs inputs")->required()->delimiter(',');
    fuse_cmd->add_option("--weights", fuse_opt.weights, "Comma-separated weights")->delimiter(',');
    fuse_cmd->add_option("--k", fuse_opt.k)->capture_default_str();
    fuse_cmd->add_flag("--keep-self", fuse_opt.keep_self)->default_str("false");
    fuse_cmd->add_option("--out", fuse_opt.out, ".pred output");
    fuse_cmd->add_option("--sim-out", fuse_opt.sim_out, "fused .cbvs output");
    add_config(fuse_cmd);

    EvalCommand eval_opt;
    auto* eval_cmd = app.add_subcommand("eval", "Score predictions with hit@K and recall@K");
    eval_cmd->add_option("--truth", eval_opt.truth)->required();
    eval_cmd->add_option("--candidates", eval_opt.candidates);
    eval_cmd->add_option("--pred", eval_opt.pred)->required();
    eval_cmd->add_option("--k-hit", eval_opt.k_hit)->delimiter(',')->capture_default_str();
    eval_cmd->add_option("--k-recall", eval_opt.k_recall)->delimiter(',')->capture_default_str();
    eval_cmd->add_option("--out", eval_opt.out, "key=value report file");
    add_config(eval_cmd);

    SweepCommand sweep_opt;
    auto* sweep_cmd = app.add_subcommand("sweep", "Train/predict/evaluate over a dim x epoch grid");
    sweep_cmd->add_option("--features", sweep_opt.features)->required();
    sweep_cmd->add_option("--truth", sweep_opt.truth, "training .rel")->required();
    sweep_cmd->add_option("--train-candidates", sweep_opt.train_candidates);
    sweep_cmd->add_option("--eval-truth", sweep_opt.eval_truth, "evaluation .rel")->required();
    sweep_cmd->add_option("--eval-candidates", sweep_opt.eval_candidates,
                          "ranking pool (default: ids in the evaluation file)");
    sweep_cmd->add_option("--dims", sweep_opt.dims)->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--epochs", sweep_opt.epochs)->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--metric", sweep_opt.metric)->capture_default_str();
    sweep_cmd->add_option("--k-hit", sweep_opt.k_hit)->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--k-recall", sweep_opt.k_recall)->delimiter(',')->capture_default_str();
    sweep_cmd->add_flag("--keep-self", sweep_opt.keep_self)->default_str("false");
    sweep_cmd->add_option("--out", sweep_opt.out, "table output file");
    sweep_opt.train.add_to(*sweep_cmd, false);
    add_config(sweep_cmd);

    try {
        auto args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    CLI::App* sub = app.get_subcommands().front();
    echo_config(*sub, err);
    try {
        if (sub == synth_cmd) {
            return cmd_synth(synth, out);
        }
        if (sub == train_cmd) {
            return cmd_train(train_opt, out);
        }
        if (sub == predict_cmd) {
            return cmd_predict(predict_opt, out);
        }
        if (sub == fuse_cmd) {
            return cmd_fuse(fuse_opt, out);
        }
        if (sub == eval_cmd) {
            return cmd_eval(eval_opt, out);
        }
        return cmd_sweep(sweep_opt, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace cbvrp::cli
