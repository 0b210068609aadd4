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

// End-to-end acceptance checks. Prints one PASS, FAIL or SKIP line per
// criterion and exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "commands.hpp"
#include "msenti/activations.hpp"
#include "msenti/baseline_model.hpp"
#include "msenti/checkpoint.hpp"
#include "msenti/corpus.hpp"
#include "msenti/grad_check.hpp"
#include "msenti/linear.hpp"
#include "msenti/naive_bayes.hpp"
#include "msenti/trainer.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace msenti;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS " : "FAIL ") << id << ": " << detail << std::endl;
    failures += pass ? 0 : 1;
}

void skip(const std::string& id, const std::string& detail) {
    std::cout << "SKIP " << id << ": " << detail << std::endl;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "msenti");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    if (code != 0) {
        std::cerr << err.str();
    }
    return code;
}

nn::Hyperparams tiny(nn::ArchitectureKind kind) {
    nn::Hyperparams hp;
    hp.kind = kind;
    hp.vocab_size = 6;
    hp.embed_dim = 3;
    hp.num_filters = 2;
    hp.kernel_width = 2;
    hp.pool_size = 2;
    hp.hidden = 3;
    hp.max_len = 7;
    return hp;
}

void gradient_soundness() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (auto kind : {nn::ArchitectureKind::subword, nn::ArchitectureKind::character}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            worst = std::max(worst, nn::grad_check(tiny(kind), seed).max_relative_error());
        }
    }
    const double secs = seconds_since(start);
    report("1 gradient soundness", worst < 1e-4 && secs < 30.0,
           "max relative error " + fmt(worst) + " over 10 seeds x 2 architectures in " +
               fmt(secs) + " s");
}

void oracle_equivalence() {
    Xoshiro256 rng(100);
    double gap = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto small = testing::random_small_corpus(rng);
        gap = std::max(gap, testing::mnb_oracle_gap(small, 1.0, trial % 2 == 0, rng));
    }
    report("2a MNB oracle", gap <= 1e-12, "max log-posterior gap " + fmt(gap) + " on 100 corpora");

    // Every class must appear for NBSVM; three fixed documents per class plus
    // random extras.
    bool beta_one = true;
    bool beta_zero = true;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        baselines::Dataset data;
        data.dimension = 6;
        for (std::size_t i = 0; i < 9 + rng.below(6); ++i) {
            std::vector<double> dense(data.dimension);
            for (double& v : dense) {
                v = static_cast<double>(rng.below(3));
            }
            data.x.push_back(testing::to_sparse(dense));
            data.y.push_back(i < 9 ? i % 3 : rng.below(3));
        }
        const double lambda = 0.05;
        const std::size_t epochs = 5;
        const auto one = baselines::nbsvm_fit(data, 1.0, lambda, 1.0, epochs, trial);
        const auto zero = baselines::nbsvm_fit(data, 0.0, lambda, 1.0, epochs, trial);
        for (std::size_t c = 0; c < 3; ++c) {
            std::vector<baselines::SparseVec> scaled;
            for (const auto& x : data.x) {
                scaled.push_back(baselines::nb_scale(x, one.ratios.row(c)));
            }
            std::vector<int> y;
            for (auto label : data.y) {
                y.push_back(label == c ? 1 : -1);
            }
            const auto svm =
                baselines::train_hinge_binary(scaled, y, data.dimension, lambda, epochs, trial + c);
            double mean_abs = 0.0;
            for (std::size_t j = 0; j < data.dimension; ++j) {
                beta_one = beta_one && one.linear.weights(c, j) == svm.weights[j];
                mean_abs += std::abs(svm.weights[j]);
            }
            mean_abs /= static_cast<double>(data.dimension);
            for (std::size_t j = 0; j < data.dimension; ++j) {
                beta_zero = beta_zero && zero.linear.weights(c, j) == mean_abs;
            }
        }
    }
    report("2b NBSVM beta=1", beta_one, "weights equal the SVM on NB-scaled features");
    report("2c NBSVM beta=0", beta_zero, "every weight equals mean |w| of the SVM");
}

train::TrainConfig planted_config(nn::ArchitectureKind kind) {
    train::TrainConfig tc;
    tc.batch_size = 32;
    tc.max_epochs = 30;
    tc.patience = 30;
    tc.seed = 1;
    tc.optimizer.learning_rate = 0.005;
    tc.model.kind = kind;
    tc.model.embed_dim = 16;
    tc.model.num_filters = 64;
    tc.model.kernel_width = 3;
    tc.model.hidden = 32;
    tc.model.max_len = 64;
    return tc;
}

struct PlantedOutcome {
    nn::ModelParams subword;
    corpus::CharVocab vocab;
    corpus::SplitSet splits;
};

PlantedOutcome planted_task() {
    const auto start = Clock::now();
    const auto sentences = testing::planted_sentences(testing::PlantedConfig{});
    const auto splits = corpus::split_corpus(testing::planted_corpus(sentences), 7);
    const auto vocab = corpus::CharVocab::build(splits.train);

    auto sub = train::train_model(planted_config(nn::ArchitectureKind::subword), splits, vocab);
    const auto sub_test = train::evaluate(sub.model, splits.test, vocab);
    const auto sub_val = train::evaluate(sub.model, splits.validation, vocab);
    const auto chr = train::train_model(planted_config(nn::ArchitectureKind::character), splits, vocab);
    const auto chr_test = train::evaluate(chr.model, splits.test, vocab);
    const double secs = seconds_since(start);

    report("3a planted subword accuracy", sub_test.accuracy >= 0.95,
           "test " + fmt(sub_test.accuracy) + ", validation " + fmt(sub_val.accuracy) +
               ", best epoch " + std::to_string(sub.history.best_epoch));
    report("3b subword beats char", sub_test.accuracy > chr_test.accuracy,
           "subword " + fmt(sub_test.accuracy) + " vs char " + fmt(chr_test.accuracy));
    report("3c planted runtime", secs < 600.0, fmt(secs) + " s for both architectures");

    std::unordered_map<std::string, testing::PlantedSentence> by_text;
    for (const auto& s : sentences) {
        by_text.emplace(s.text, s);
    }
    std::size_t positives = 0;
    std::size_t hits = 0;
    for (const auto& c : splits.test.comments) {
        if (c.label() != corpus::Polarity::positive) {
            continue;
        }
        const auto& planted = by_text.at(c.text());
        const auto exported = viz::conv_activations(sub.model, c.text(), vocab);
        std::size_t best_window = 0;
        double best = -1.0;
        for (std::size_t f = 0; f < exported.responses.dim(0); ++f) {
            for (std::size_t w = 0; w < exported.width(); ++w) {
                if (exported.responses(f, w) > best) {
                    best = exported.responses(f, w);
                    best_window = w;
                }
            }
        }
        const std::size_t end = planted.planted_begin + planted.planted_length;
        ++positives;
        hits += best_window < end && planted.planted_begin < best_window + exported.window_span ? 1 : 0;
    }
    const double share = static_cast<double>(hits) / static_cast<double>(positives);
    report("3d maximal window overlaps planted word", share >= 0.8,
           std::to_string(hits) + "/" + std::to_string(positives) + " positive test sentences (" +
               fmt(share) + ")");
    return {std::move(sub.model), vocab, splits};
}

void released_dataset() {
    const char* path = std::getenv("MSENTI_HIEN_DATASET");
    if (path == nullptr || *path == '\0') {
        skip("4 released dataset", "MSENTI_HIEN_DATASET is not set");
        return;
    }
    const auto filtered = corpus::filter_comments(corpus::load_corpus(path));
    const auto splits = corpus::split_corpus(filtered.corpus, 0);
    const auto vocab = corpus::CharVocab::build(splits.train);
    const auto trained = train::train_model(train::TrainConfig{}, splits, vocab);
    const auto m = train::evaluate(trained.model, splits.test, vocab);
    report("4a subword on released data", std::abs(m.accuracy - 0.697) <= 0.04,
           "accuracy " + fmt(m.accuracy) + ", target 0.697 +- 0.04");
    const bool f1_ok = std::abs(m.macro_f1 - 0.658) <= 0.05 || std::abs(m.weighted_f1 - 0.658) <= 0.05;
    report("4b subword F1 on released data", f1_ok,
           "macro " + fmt(m.macro_f1) + ", weighted " + fmt(m.weighted_f1) + ", target 0.658 +- 0.05");
    const auto mnb = baselines::BaselineModel::fit(splits.train, baselines::BaselineConfig{});
    const auto mm = mnb.evaluate(splits.test);
    report("4c MNB unigram on released data", std::abs(mm.accuracy - 0.6675) <= 0.03,
           "accuracy " + fmt(mm.accuracy) + ", target 0.6675 +- 0.03");
}

void determinism() {
    testing::TempDir dir;
    testing::PlantedConfig pc;
    pc.sentences = 300;
    pc.seed = 77;
    corpus::write_corpus(testing::planted_corpus(testing::planted_sentences(pc)), dir / "c.tsv");
    testing::write_file(dir / "config.json",
                        R"({"embed_dim": 8, "num_filters": 16, "hidden": 8, "max_len": 48, )"
                        R"("batch_size": 32, "max_epochs": 3, "seed": 11})");
    bool ok = true;
    for (const char* run : {"a", "b"}) {
        const auto out = dir / run;
        ok = ok &&
             run_cli({"prepare", "--input", (dir / "c.tsv").string(), "--out-dir",
                      (out / "data").string(), "--seed", "5"}) == 0 &&
             run_cli({"train", "--config", (dir / "config.json").string(), "--data-dir",
                      (out / "data").string(), "--out", (out / "m.ckpt").string()}) == 0;
        std::ostringstream metrics;
        std::ostringstream err;
        ok = ok && cli::run({"msenti", "eval", "--model", (out / "m.ckpt").string(), "--data",
                             (out / "data" / "test.tsv").string()},
                            metrics, err) == 0;
        testing::write_file(out / "metrics.json", metrics.str());
    }
    const bool same_ckpt = ok && testing::read_file(dir / "a" / "m.ckpt") == testing::read_file(dir / "b" / "m.ckpt");
    const bool same_metrics =
        ok && testing::read_file(dir / "a" / "metrics.json") == testing::read_file(dir / "b" / "metrics.json");
    report("5 determinism", same_ckpt && same_metrics,
           std::string("checkpoints ") + (same_ckpt ? "identical" : "differ") + ", metrics " +
               (same_metrics ? "identical" : "differ"));
}

void first_batch_loss() {
    testing::PlantedConfig pc;
    pc.sentences = 600;
    pc.seed = 9;
    const auto all = testing::planted_corpus(testing::planted_sentences(pc));
    corpus::SplitSet splits;
    std::array<std::size_t, 3> taken{};
    for (const auto& c : all.comments) {
        const auto k = corpus::class_index(c.label());
        if (taken[k] < 42) {
            splits.train.comments.push_back(c);
        } else if (taken[k] < 44) {
            splits.validation.comments.push_back(c);
        }
        ++taken[k];
    }
    train::TrainConfig tc;
    tc.max_epochs = 1;
    const auto vocab = corpus::CharVocab::build(splits.train);
    const auto r = train::train_model(tc, splits, vocab);
    const double loss = r.history.first_batch_loss;
    report("6 first-batch loss", std::abs(loss - 1.0986) <= 0.05,
           fmt(loss) + " on a balanced batch of " + std::to_string(splits.train.size()) +
               " with default hyperparameters");
}

void checkpoint_round_trip(const PlantedOutcome& planted) {
    testing::TempDir dir;
    const auto before = train::evaluate(planted.subword, planted.splits.test, planted.vocab);
    checkpoint::save_checkpoint(planted.subword, planted.vocab, dir / "n.ckpt");
    const auto loaded = checkpoint::load_neural_checkpoint(dir / "n.ckpt");
    const auto after = train::evaluate(loaded.model, planted.splits.test, loaded.vocab);
    report("7a neural round trip", before == after && metrics_to_json(before) == metrics_to_json(after),
           "test metrics before and after save/load " + std::string(before == after ? "match" : "differ"));

    bool all_match = true;
    for (auto method : {baselines::Method::mnb, baselines::Method::nbsvm, baselines::Method::svm}) {
        baselines::BaselineConfig bc;
        bc.method = method;
        const auto model = baselines::BaselineModel::fit(planted.splits.train, bc);
        const auto b = model.evaluate(planted.splits.test);
        checkpoint::save_checkpoint(model, dir / "b.ckpt");
        const auto a = checkpoint::load_baseline_checkpoint(dir / "b.ckpt").evaluate(planted.splits.test);
        all_match = all_match && a == b && metrics_to_json(a) == metrics_to_json(b);
    }
    report("7b baseline round trip", all_match, "mnb, nbsvm and svm metrics before and after save/load");
}

void kappa_arithmetic() {
    using P = corpus::Polarity;
    const std::vector<P> a = {P::positive, P::positive, P::negative, P::negative};
    const std::vector<P> b = {P::positive, P::negative, P::negative, P::negative};
    const double half = corpus::cohens_kappa(a, b);
    const double one = corpus::cohens_kappa(a, a);
    report("8 kappa", half == 0.5 && one == 1.0, "hand example " + fmt(half) + ", identical " + fmt(one));
}

} // namespace

int main() {
    try {
        gradient_soundness();
        oracle_equivalence();
        const auto planted = planted_task();
        released_dataset();
        determinism();
        first_batch_loss();
        checkpoint_round_trip(planted);
        kappa_arithmetic();
    } catch (const std::exception& e) {
        std::cout << "FAIL aborted: " << e.what() << std::endl;
        return 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
