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

#ifndef MSENTI_ACTIVATIONS_HPP
#define MSENTI_ACTIVATIONS_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "msenti/corpus.hpp"
#include "msenti/model.hpp"
#include "msenti/tensor.hpp"

namespace msenti::viz {

/// Post-ReLU convolution responses of one sentence over its unpadded span.
struct FeatureMapExport {
    std::string text;
    std::vector<std::string> characters; ///< one UTF-8 character per input position
    nn::Tensor responses;                ///< (F, true_length - m + 1)
    std::size_t window_span = 0;         ///< m
    std::vector<std::size_t> top_windows;///< per filter, first window of maximal response

    std::size_t width() const { return responses.empty() ? 0 : responses.dim(1); }
};

/// Throws InputError for a character-architecture model ("no convolution
/// layer") or when the text is shorter than the filter width.
FeatureMapExport conv_activations(const nn::ModelParams& model, std::string_view text,
                                  const corpus::CharVocab& vocab);

/// `char_pos,char,filter_0,...,filter_{F-1}`, one row per window start.
/// Values carry 17 significant digits; the char column is CSV-quoted when it
/// contains a comma, quote or line break.
std::string activation_csv(const FeatureMapExport& exported);
void export_activation_csv(const FeatureMapExport& exported, const std::filesystem::path& path);

/// Parsed form of an activation CSV.
struct ActivationTable {
    std::vector<std::size_t> positions;
    std::vector<std::string> characters;
    nn::Tensor responses; ///< (F, rows)
};

ActivationTable parse_activation_csv(std::string_view csv);
ActivationTable import_activation_csv(const std::filesystem::path& path);

} // namespace msenti::viz

#endif // MSENTI_ACTIVATIONS_HPP
