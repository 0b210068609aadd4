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

#ifndef MSENTI_CHECKPOINT_HPP
#define MSENTI_CHECKPOINT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "msenti/baseline_model.hpp"
#include "msenti/corpus.hpp"
#include "msenti/model.hpp"

/**
 * Checkpoint layout:
 *
 *   bytes 0..7   magic "MSENTI01"
 *   bytes 8..15  header length H, little-endian uint64
 *   next H bytes UTF-8 JSON header: format_version, model_kind,
 *                architecture_kind, model settings, vocabulary and a tensor
 *                manifest [{name, shape, offset}] where offset counts bytes
 *                from the start of the data section
 *   remainder    tensor data, little-endian IEEE-754 doubles, manifest order
 */
namespace msenti::checkpoint {

inline constexpr std::string_view kMagic = "MSENTI01";
inline constexpr int kFormatVersion = 1;

enum class ModelKind { subword_lstm, char_lstm, mnb, nbsvm, svm };

std::string_view model_kind_name(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);
bool is_neural(ModelKind kind);

struct NeuralCheckpoint {
    nn::ModelParams model;
    corpus::CharVocab vocab;
};

using AnyModel = std::variant<NeuralCheckpoint, baselines::BaselineModel>;

std::string serialize(const nn::ModelParams& model, const corpus::CharVocab& vocab);
std::string serialize(const baselines::BaselineModel& model);

/// Throws FormatError for bad magic, unsupported versions, truncation,
/// trailing bytes, or tensors that disagree with the declared settings.
AnyModel deserialize(std::string_view bytes);
ModelKind peek_model_kind(std::string_view bytes);

void save_checkpoint(const nn::ModelParams& model, const corpus::CharVocab& vocab,
                     const std::filesystem::path& path);
void save_checkpoint(const baselines::BaselineModel& model, const std::filesystem::path& path);

AnyModel load_checkpoint(const std::filesystem::path& path);
NeuralCheckpoint load_neural_checkpoint(const std::filesystem::path& path);
baselines::BaselineModel load_baseline_checkpoint(const std::filesystem::path& path);

std::string read_file_bytes(const std::filesystem::path& path);

} // namespace msenti::checkpoint

#endif // MSENTI_CHECKPOINT_HPP
