// Copyright 2026 The msenti Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string_view>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "msenti/activations.hpp"
#include "msenti/baseline_model.hpp"
#include "msenti/checkpoint.hpp"
#include "msenti/corpus.hpp"
#include "msenti/error.hpp"
#include "msenti/metrics.hpp"
#include "msenti/trainer.hpp"

namespace msenti::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shortest representation that parses back to the same double.
std::string num(double value) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

struct PrepareArgs {
    std::string input;
    std::string out_dir;
    std::uint64_t seed = 1;
    std::size_t max_words = corpus::kDefaultMaxWords;
};

struct TrainArgs {
    std::string config;
    std::string data_dir;
    std::string arch;
    std::string out;
    std::string history;
    std::uint64_t seed = 0;
    std::size_t epochs = 0;
    std::size_t patience = 0;
    std::size_t batch_size = 0;
    double learning_rate = 0.0;
    std::size_t max_len = 0;
};

struct EvalArgs {
    std::string model;
    std::string data;
};

struct BaselineArgs {
    std::string method;
    std::string features;
    std::string data_dir;
    std::string out;
    std::string split = "test";
    baselines::BaselineConfig config;
    bool raw_counts = false;
};

struct PredictArgs {
    std::string model;
    std::string text;
};

struct InspectArgs {
    std::string model;
    std::string text;
    std::string out;
};

struct KappaArgs {
    std::string a;
    std::string b;
};

// Every key a run config may carry. Anything else is rejected by name.
const std::set<std::string, std::less<>> kConfigKeys = {
    "architecture", "seed",        "batch_size",   "max_epochs", "patience",
    "learning_rate", "beta1",      "beta2",        "embed_dim",  "num_filters",
    "kernel_width", "pool_size",   "hidden",       "max_len",    "peephole",
    "data_dir",     "out",         "history",
};

std::size_t config_size(const json& value, const std::string& key) {
    if (!value.is_number_unsigned()) {
        throw InputError("config key '" + key + "' must be a non-negative integer");
    }
    return value.get<std::size_t>();
}

double config_real(const json& value, const std::string& key) {
    if (!value.is_number()) {
        throw InputError("config key '" + key + "' must be a number");
    }
    return value.get<double>();
}

std::string config_string(const json& value, const std::string& key) {
    if (!value.is_string()) {
        throw InputError("config key '" + key + "' must be a string");
    }
    return value.get<std::string>();
}

nn::ArchitectureKind architecture_or_throw(std::string_view name) {
    const auto kind = nn::parse_architecture(name);
    if (!kind) {
        throw InputError("unknown architecture '" + std::string(name) + "' (expected subword or char)");
    }
    return *kind;
}

struct RunConfig {
    train::TrainConfig train;
    std::string data_dir;
    std::string out;
    std::string history;
};

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw InputError("config '" + path.string() + "' must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (!kConfigKeys.contains(key)) {
            throw InputError("unknown config key '" + key + "'");
        }
    }

    RunConfig rc;
    auto& tc = rc.train;
    auto& hp = tc.model;
    for (const auto& [key, value] : doc.items()) {
        if (key == "architecture") hp.kind = architecture_or_throw(config_string(value, key));
        else if (key == "seed") tc.seed = config_size(value, key);
        else if (key == "batch_size") tc.batch_size = config_size(value, key);
        else if (key == "max_epochs") tc.max_epochs = config_size(value, key);
        else if (key == "patience") tc.patience = config_size(value, key);
        else if (key == "learning_rate") tc.optimizer.learning_rate = config_real(value, key);
        else if (key == "beta1") tc.optimizer.beta1 = config_real(value, key);
        else if (key == "beta2") tc.optimizer.beta2 = config_real(value, key);
        else if (key == "embed_dim") hp.embed_dim = config_size(value, key);
        else if (key == "num_filters") hp.num_filters = config_size(value, key);
        else if (key == "kernel_width") hp.kernel_width = config_size(value, key);
        else if (key == "pool_size") hp.pool_size = config_size(value, key);
        else if (key == "hidden") hp.hidden = config_size(value, key);
        else if (key == "max_len") hp.max_len = config_size(value, key);
        else if (key == "peephole") {
            if (!value.is_boolean()) {
                throw InputError("config key 'peephole' must be true or false");
            }
            hp.peephole = value.get<bool>();
        }
        else if (key == "data_dir") rc.data_dir = config_string(value, key);
        else if (key == "out") rc.out = config_string(value, key);
        else if (key == "history") rc.history = config_string(value, key);
    }
    return rc;
}

int cmd_prepare(const PrepareArgs& a, std::ostream& out) {
    const auto raw = corpus::load_corpus(a.input);
    auto filtered = corpus::filter_comments(raw, a.max_words);
    const auto split = corpus::split_corpus(filtered.corpus, a.seed);
    fs::create_directories(a.out_dir);
    corpus::write_split(split, filtered.report, a.out_dir);

    const auto& r = filtered.report;
    out << "input " << r.input << " kept " << r.kept << " non_roman " << r.non_roman
        << " too_long " << r.too_long << '\n';
    out << "train " << split.train.size() << " validation " << split.validation.size()
        << " test " << split.test.size() << '\n';
    return kSuccess;
}

int cmd_train(const TrainArgs& a, const CLI::App& sub, std::ostream& out) {
    RunConfig rc = a.config.empty() ? RunConfig{} : load_run_config(a.config);
    auto& tc = rc.train;
    if (sub.count("--data-dir")) rc.data_dir = a.data_dir;
    if (sub.count("--out")) rc.out = a.out;
    if (sub.count("--history")) rc.history = a.history;
    if (sub.count("--arch")) tc.model.kind = architecture_or_throw(a.arch);
    if (sub.count("--seed")) tc.seed = a.seed;
    if (sub.count("--epochs")) tc.max_epochs = a.epochs;
    if (sub.count("--patience")) tc.patience = a.patience;
    if (sub.count("--batch-size")) tc.batch_size = a.batch_size;
    if (sub.count("--lr")) tc.optimizer.learning_rate = a.learning_rate;
    if (sub.count("--max-len")) tc.model.max_len = a.max_len;

    if (rc.data_dir.empty()) {
        throw InputError("no data directory: pass --data-dir or set data_dir in the config");
    }
    if (rc.out.empty()) {
        throw InputError("no output path: pass --out or set out in the config");
    }
    tc.validate();

    const auto splits = corpus::read_split(rc.data_dir);
    const auto vocab = corpus::CharVocab::build(splits.train);
    const auto result = train::train_model(tc, splits, vocab, [&out](const train::EpochRecord& e) {
        out << "epoch " << e.epoch << " train_loss " << num(e.train_loss) << " val_loss "
            << num(e.val_loss) << " val_acc " << num(e.val_accuracy) << '\n';
    });

    const fs::path model_path = rc.out;
    const fs::path history_path = rc.history.empty()
                                      ? fs::path(model_path).replace_extension(".history.csv")
                                      : fs::path(rc.history);
    checkpoint::save_checkpoint(result.model, vocab, model_path);
    train::write_history_csv(result.history, history_path);
    out << "best_epoch " << result.history.best_epoch << '\n';
    return kSuccess;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const auto model = checkpoint::load_checkpoint(a.model);
    const auto data = corpus::load_corpus(a.data);
    const Metrics metrics = std::visit(
        [&data](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, checkpoint::NeuralCheckpoint>) {
                return train::evaluate(m.model, data, m.vocab);
            } else {
                return m.evaluate(data);
            }
        },
        model);
    out << metrics_to_json(metrics) << '\n';
    return kSuccess;
}

int cmd_baseline(BaselineArgs a, std::ostream& out) {
    const auto method = baselines::parse_method(a.method);
    if (!method) {
        throw InputError("unknown method '" + a.method + "' (expected mnb, nbsvm or svm)");
    }
    const auto features = baselines::parse_feature_kind(a.features);
    if (!features) {
        throw InputError("unknown feature set '" + a.features + "' (expected uni, unibi or tfidf)");
    }
    if (a.split != "test" && a.split != "validation") {
        throw InputError("unknown split '" + a.split + "' (expected test or validation)");
    }
    a.config.method = *method;
    a.config.features = *features;
    a.config.binarize = !a.raw_counts;

    const auto splits = corpus::read_split(a.data_dir);
    const auto model = baselines::BaselineModel::fit(splits.train, a.config);
    if (!a.out.empty()) {
        checkpoint::save_checkpoint(model, a.out);
    }
    const auto& eval_set = a.split == "test" ? splits.test : splits.validation;
    out << metrics_to_json(model.evaluate(eval_set)) << '\n';
    return kSuccess;
}

checkpoint::NeuralCheckpoint neural_or_throw(const fs::path& path, std::string_view command) {
    auto model = checkpoint::load_checkpoint(path);
    if (!std::holds_alternative<checkpoint::NeuralCheckpoint>(model)) {
        throw InputError(std::string(command) + " needs a subword or char checkpoint; '" +
                         path.string() + "' holds a baseline model");
    }
    return std::get<checkpoint::NeuralCheckpoint>(std::move(model));
}

int cmd_predict(const PredictArgs& a, std::ostream& out) {
    const auto ck = neural_or_throw(a.model, "predict");
    const auto p = train::predict(ck.model, a.text, ck.vocab);
    out << corpus::polarity_name(p.label);
    for (double prob : p.probabilities) {
        out << ' ' << num(prob);
    }
    out << '\n';
    return kSuccess;
}

int cmd_inspect(const InspectArgs& a, std::ostream& out) {
    const auto ck = neural_or_throw(a.model, "inspect");
    const auto exported = viz::conv_activations(ck.model, a.text, ck.vocab);
    viz::export_activation_csv(exported, a.out);
    out << "rows " << exported.width() << " filters " << exported.responses.dim(0) << '\n';
    return kSuccess;
}

int cmd_kappa(const KappaArgs& a, std::ostream& out) {
    const auto la = corpus::load_labels(a.a);
    const auto lb = corpus::load_labels(a.b);
    out << num(corpus::cohens_kappa(la, lb)) << '\n';
    return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sentiment analysis for romanized code-mixed text", "msenti"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MSENTI_VERSION_STRING);

    PrepareArgs prep;
    auto* prepare = app.add_subcommand("prepare", "Filter a labeled TSV corpus and split it into train/validation/test");
    prepare->add_option("--input", prep.input, "Corpus file, one `text<TAB>label` per line")->required();
    prepare->add_option("--out-dir", prep.out_dir, "Directory for train.tsv, validation.tsv, test.tsv and manifest.json")->required();
    prepare->add_option("--seed", prep.seed, "Split seed")->capture_default_str();
    prepare->add_option("--max-words", prep.max_words, "Drop comments with more whitespace tokens than this")->capture_default_str();

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Train a Subword-LSTM or Char-LSTM model; flags override the config file");
    train_cmd->add_option("--config", tr.config, "JSON run config (unknown keys are rejected)");
    train_cmd->add_option("--data-dir", tr.data_dir, "Directory written by `prepare`");
    train_cmd->add_option("--arch", tr.arch, "Architecture: subword or char");
    train_cmd->add_option("--out", tr.out, "Checkpoint path");
    train_cmd->add_option("--history", tr.history, "History CSV path (default: checkpoint path with .history.csv)");
    train_cmd->add_option("--seed", tr.seed, "Initialization and shuffling seed");
    train_cmd->add_option("--epochs", tr.epochs, "Maximum number of epochs");
    train_cmd->add_option("--patience", tr.patience, "Epochs without validation-loss improvement before stopping");
    train_cmd->add_option("--batch-size", tr.batch_size, "Minibatch size");
    train_cmd->add_option("--lr", tr.learning_rate, "Adamax learning rate");
    train_cmd->add_option("--max-len", tr.max_len, "Padded sentence length in characters");

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Print metrics JSON for any checkpoint on a labeled TSV file");
    eval->add_option("--model", ev.model, "Checkpoint (neural or baseline)")->required();
    eval->add_option("--data", ev.data, "Labeled TSV file")->required();

    BaselineArgs bl;
    auto* baseline = app.add_subcommand("baseline", "Fit a sparse baseline on the train split and print metrics JSON");
    baseline->add_option("--method", bl.method, "mnb, nbsvm or svm")->required();
    baseline->add_option("--features", bl.features, "uni, unibi or tfidf")->required();
    baseline->add_option("--data-dir", bl.data_dir, "Directory written by `prepare`")->required();
    baseline->add_option("--out", bl.out, "Optional checkpoint path for the fitted model");
    baseline->add_option("--split", bl.split, "Split to evaluate on: test or validation")->capture_default_str();
    baseline->add_option("--alpha", bl.config.alpha, "Smoothing for mnb and nbsvm")->capture_default_str();
    baseline->add_option("--beta", bl.config.beta, "NBSVM interpolation weight")->capture_default_str();
    baseline->add_option("--lambda", bl.config.lambda, "L2 regularization for svm and nbsvm")->capture_default_str();
    baseline->add_option("--epochs", bl.config.epochs, "Passes of subgradient descent for svm and nbsvm")->capture_default_str();
    baseline->add_option("--seed", bl.config.seed, "Seed for svm and nbsvm example order")->capture_default_str();
    baseline->add_flag("--raw-counts", bl.raw_counts, "MNB on raw counts instead of binarized features");

    PredictArgs pr;
    auto* predict = app.add_subcommand("predict", "Print `label p_negative p_neutral p_positive` for one sentence");
    predict->add_option("--model", pr.model, "Subword or char checkpoint")->required();
    predict->add_option("--text", pr.text, "Sentence to classify")->required();

    InspectArgs in;
    auto* inspect = app.add_subcommand("inspect", "Export convolution responses for one sentence as CSV");
    inspect->add_option("--model", in.model, "Subword checkpoint")->required();
    inspect->add_option("--text", in.text, "Sentence to inspect")->required();
    inspect->add_option("--out", in.out, "CSV output path")->required();

    KappaArgs ka;
    auto* kappa = app.add_subcommand("kappa", "Cohen's kappa between two label files, one label per line");
    kappa->add_option("--a", ka.a, "First annotator's labels")->required();
    kappa->add_option("--b", ka.b, "Second annotator's labels")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& s : args) {
        argv.push_back(s.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputFailure;
    }

    try {
        if (prepare->parsed()) return cmd_prepare(prep, out);
        if (train_cmd->parsed()) return cmd_train(tr, *train_cmd, out);
        if (eval->parsed()) return cmd_eval(ev, out);
        if (baseline->parsed()) return cmd_baseline(bl, out);
        if (predict->parsed()) return cmd_predict(pr, out);
        if (inspect->parsed()) return cmd_inspect(in, out);
        if (kappa->parsed()) return cmd_kappa(ka, out);
    } catch (const InvariantError& e) {
        err << "msenti: internal error: " << e.what() << '\n';
        return kInternalFailure;
    } catch (const Error& e) {
        err << "msenti: " << e.what() << '\n';
        return kInputFailure;
    } catch (const fs::filesystem_error& e) {
        err << "msenti: " << e.what() << '\n';
        return kInputFailure;
    } catch (const std::exception& e) {
        err << "msenti: internal error: " << e.what() << '\n';
        return kInternalFailure;
    }
    return kInputFailure;
}

} // namespace msenti::cli
