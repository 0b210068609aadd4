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

#ifndef MSENTI_TRAINER_HPP
#define MSENTI_TRAINER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "msenti/adamax.hpp"
#include "msenti/corpus.hpp"
#include "msenti/metrics.hpp"
#include "msenti/model.hpp"

namespace msenti::train {

struct TrainConfig {
    std::size_t batch_size = 128;
    std::size_t max_epochs = 50;
    std::size_t patience = 5;
    AdamaxConfig optimizer;
    std::uint64_t seed = 1;
    /// Architecture and sizes. vocab_size is overwritten from the vocabulary.
    nn::Hyperparams model;

    void validate() const;
};

struct EpochRecord {
    std::size_t epoch = 0; ///< 1-based
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;

    friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    /// Loss of the very first mini-batch, before any update.
    double first_batch_loss = 0.0;
    /// Epoch whose parameters were returned (lowest validation loss).
    std::size_t best_epoch = 0;

    friend bool operator==(const TrainHistory&, const TrainHistory&) = default;
};

struct TrainResult {
    nn::ModelParams model;
    TrainHistory history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/**
 * Mini-batch training with Adamax.
 *
 * Each epoch reshuffles the training split with the seeded generator and
 * walks it in batches of batch_size (the last batch may be smaller). After
 * every epoch the validation loss is measured; the parameters with the
 * lowest validation loss are kept, and training stops once `patience`
 * consecutive epochs fail to improve on it, or at max_epochs.
 *
 * Throws NumericError if a batch loss becomes non-finite.
 */
TrainResult train_model(const TrainConfig& config, const corpus::SplitSet& splits,
                        const corpus::CharVocab& vocab, const EpochCallback& on_epoch = {});

/// Encodes every comment with the model's max_len.
std::vector<corpus::EncodedSentence> encode_corpus(const corpus::Corpus& corpus,
                                                   const corpus::CharVocab& vocab,
                                                   std::size_t max_len);
std::vector<std::size_t> corpus_labels(const corpus::Corpus& corpus);

Metrics evaluate(const nn::ModelParams& model, const corpus::Corpus& corpus,
                 const corpus::CharVocab& vocab);

struct Prediction {
    corpus::Polarity label = corpus::Polarity::negative;
    std::array<double, corpus::kNumClasses> probabilities{};
};

Prediction predict(const nn::ModelParams& model, std::string_view text,
                   const corpus::CharVocab& vocab);

/// `epoch,train_loss,train_acc,val_loss,val_acc` with 17 significant digits.
std::string history_csv(const TrainHistory& history);
void write_history_csv(const TrainHistory& history, const std::filesystem::path& path);

} // namespace msenti::train

#endif // MSENTI_TRAINER_HPP
