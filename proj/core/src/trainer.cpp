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

#include "msenti/trainer.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "msenti/error.hpp"
#include "msenti/layers.hpp"
#include "msenti/network.hpp"
#include "msenti/rng.hpp"

namespace msenti::train {

namespace {

constexpr std::uint64_t kShuffleStream = 0x7368'7566'666c'6521ULL;

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
};

EvalResult evaluate_encoded(const nn::ModelParams& model,
                            std::span<const corpus::EncodedSentence> xs,
                            std::span<const std::size_t> ys) {
    const nn::Tensor logits = nn::predict_logits(model, xs);
    const auto xent = nn::softmax_xent(logits, ys);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        correct += argmax_class(xent.probabilities.row(i)) == ys[i] ? 1 : 0;
    }
    return {xent.loss, static_cast<double>(correct) / static_cast<double>(ys.size())};
}

} // namespace

void TrainConfig::validate() const {
    if (batch_size < 1) {
        throw InputError("batch_size must be >= 1");
    }
    if (max_epochs < 1) {
        throw InputError("max_epochs must be >= 1");
    }
    if (!(optimizer.learning_rate > 0.0)) {
        throw InputError("learning_rate must be > 0");
    }
    if (!(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0) ||
        !(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0)) {
        throw InputError("beta1 and beta2 must lie in [0, 1)");
    }
}

std::vector<corpus::EncodedSentence> encode_corpus(const corpus::Corpus& corpus,
                                                   const corpus::CharVocab& vocab,
                                                   std::size_t max_len) {
    std::vector<corpus::EncodedSentence> out;
    out.reserve(corpus.size());
    for (const auto& c : corpus.comments) {
        out.push_back(corpus::encode_sentence(c.text(), vocab, max_len));
    }
    return out;
}

std::vector<std::size_t> corpus_labels(const corpus::Corpus& corpus) {
    std::vector<std::size_t> out;
    out.reserve(corpus.size());
    for (const auto& c : corpus.comments) {
        out.push_back(corpus::class_index(c.label()));
    }
    return out;
}

TrainResult train_model(const TrainConfig& config, const corpus::SplitSet& splits,
                        const corpus::CharVocab& vocab, const EpochCallback& on_epoch) {
    config.validate();
    if (splits.train.empty() || splits.validation.empty()) {
        throw InputError("training requires non-empty train and validation splits");
    }
    nn::Hyperparams hp = config.model;
    hp.vocab_size = vocab.size();

    nn::ModelParams model = nn::ModelParams::initialize(hp, config.seed);
    AdamaxState optimizer(model, config.optimizer);
    Xoshiro256 shuffler(config.seed ^ kShuffleStream);

    const auto train_x = encode_corpus(splits.train, vocab, hp.max_len);
    const auto train_y = corpus_labels(splits.train);
    const auto val_x = encode_corpus(splits.validation, vocab, hp.max_len);
    const auto val_y = corpus_labels(splits.validation);

    TrainResult result{model, {}};
    double best_val_loss = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    bool first_batch = true;

    std::vector<std::size_t> order(train_x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<corpus::EncodedSentence> batch_x;
    std::vector<std::size_t> batch_y;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        shuffler.shuffle(std::span(order));
        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            batch_x.clear();
            batch_y.clear();
            for (std::size_t i = start; i < end; ++i) {
                batch_x.push_back(train_x[order[i]]);
                batch_y.push_back(train_y[order[i]]);
            }
            const auto trace = nn::forward(model, batch_x);
            auto step = nn::backward(trace, model, batch_y);
            if (!std::isfinite(step.loss)) {
                throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) +
                                   ", batch starting at example " + std::to_string(start));
            }
            if (first_batch) {
                result.history.first_batch_loss = step.loss;
                first_batch = false;
            }
            loss_sum += step.loss * static_cast<double>(batch_y.size());
            for (std::size_t b = 0; b < batch_y.size(); ++b) {
                correct += argmax_class(step.probabilities.row(b)) == batch_y[b] ? 1 : 0;
            }
            adamax_step(model, step.grads, optimizer);
        }

        const EvalResult val = evaluate_encoded(model, val_x, val_y);
        if (!std::isfinite(val.loss)) {
            throw NumericError("non-finite validation loss at epoch " + std::to_string(epoch));
        }
        const auto n = static_cast<double>(order.size());
        const EpochRecord record{epoch, loss_sum / n, static_cast<double>(correct) / n, val.loss,
                                 val.accuracy};
        result.history.epochs.push_back(record);
        if (on_epoch) {
            on_epoch(record);
        }

        if (val.loss < best_val_loss) {
            best_val_loss = val.loss;
            result.model = model;
            result.history.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= config.patience) {
            break;
        }
    }
    return result;
}

Metrics evaluate(const nn::ModelParams& model, const corpus::Corpus& corpus,
                 const corpus::CharVocab& vocab) {
    if (corpus.empty()) {
        throw InputError("cannot evaluate on an empty corpus");
    }
    const auto xs = encode_corpus(corpus, vocab, model.hp.max_len);
    const auto truth = corpus_labels(corpus);
    const nn::Tensor logits = nn::predict_logits(model, xs);
    std::vector<std::size_t> predicted(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        predicted[i] = argmax_class(logits.row(i));
    }
    return compute_metrics(truth, predicted);
}

Prediction predict(const nn::ModelParams& model, std::string_view text,
                   const corpus::CharVocab& vocab) {
    const std::vector<corpus::EncodedSentence> xs{
        corpus::encode_sentence(text, vocab, model.hp.max_len)};
    const nn::Tensor probs = nn::softmax(nn::predict_logits(model, xs));
    Prediction p;
    for (std::size_t c = 0; c < corpus::kNumClasses; ++c) {
        p.probabilities[c] = probs(0, c);
    }
    p.label = corpus::polarity_from_index(argmax_class(probs.row(0)));
    return p;
}

std::string history_csv(const TrainHistory& history) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
    for (const auto& e : history.epochs) {
        out << e.epoch << ',' << e.train_loss << ',' << e.train_accuracy << ',' << e.val_loss
            << ',' << e.val_accuracy << '\n';
    }
    return out.str();
}

void write_history_csv(const TrainHistory& history, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write history file '" + path.string() + "'");
    }
    out << history_csv(history);
}

} // namespace msenti::train
