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

#ifndef MSENTI_MODEL_HPP
#define MSENTI_MODEL_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msenti/tensor.hpp"

namespace msenti::nn {

inline constexpr std::size_t kNumClasses = 3;

/// subword: embed -> conv -> relu -> max-pool -> LSTM -> dense.
/// character: embed -> LSTM -> dense (no convolution or pooling).
enum class ArchitectureKind { subword, character };

std::string_view architecture_name(ArchitectureKind kind);
std::optional<ArchitectureKind> parse_architecture(std::string_view name);

struct Hyperparams {
    ArchitectureKind kind = ArchitectureKind::subword;
    std::size_t vocab_size = 2;   ///< including pad and oov
    std::size_t embed_dim = 64;   ///< d
    std::size_t num_filters = 128;///< F
    std::size_t kernel_width = 3; ///< m
    std::size_t pool_size = 2;    ///< p
    std::size_t hidden = 128;
    std::size_t max_len = 200;    ///< L_max, the padded input length
    bool peephole = true;         ///< output-gate peephole on the cell state

    /// Width of each LSTM input vector: F for subword, d for character.
    std::size_t lstm_input_size() const;
    /// Convolution output width, max_len - m + 1 (subword only).
    std::size_t conv_width() const;
    /// Number of LSTM timesteps.
    std::size_t steps() const;

    /// Throws InputError when the combination cannot run (zero sizes,
    /// max_len < m, conv width < p).
    void validate() const;

    friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

enum Gate : std::size_t { kInputGate = 0, kForgetGate = 1, kCandidate = 2, kOutputGate = 3 };
inline constexpr std::size_t kNumGates = 4;

template <typename T>
struct NamedRef {
    std::string name;
    T* tensor;
};

/**
 * Every trainable tensor of a Subword-LSTM or Char-LSTM.
 *
 * Shapes: embedding (V, d); conv_weight (F, d, m); conv_bias (F);
 * lstm_w[g] (H, in); lstm_u[g] (H, H); lstm_b[g] (H); lstm_peephole (H);
 * dense_weight (H, 3); dense_bias (3). Convolution tensors are empty for
 * the character architecture and the peephole is empty when disabled.
 *
 * The same type doubles as the gradient container.
 */
struct ModelParams {
    Hyperparams hp;
    Tensor embedding;
    Tensor conv_weight;
    Tensor conv_bias;
    std::array<Tensor, kNumGates> lstm_w;
    std::array<Tensor, kNumGates> lstm_u;
    std::array<Tensor, kNumGates> lstm_b;
    Tensor lstm_peephole;
    Tensor dense_weight;
    Tensor dense_bias;

    /// Bumped by every in-place update so traces can detect staleness.
    std::uint64_t revision = 0;

    static ModelParams zeros(const Hyperparams& hp);
    /// Glorot-uniform weights from the seeded generator, zero biases except
    /// the forget gate (1.0), zero pad embedding row, zero peephole.
    static ModelParams initialize(const Hyperparams& hp, std::uint64_t seed);

    /// Tensors present for this architecture, in canonical order.
    std::vector<NamedRef<Tensor>> named();
    std::vector<NamedRef<const Tensor>> named() const;

    /// Declared shape for each canonical name.
    static std::vector<std::pair<std::string, Shape>> expected_shapes(const Hyperparams& hp);

    std::size_t parameter_count() const;
    /// Throws InvariantError when a tensor disagrees with its declared shape.
    void validate() const;

    /// Bitwise equality of hyperparameters and every tensor.
    bool same_values(const ModelParams& other) const;
};

using Gradients = ModelParams;

} // namespace msenti::nn

#endif // MSENTI_MODEL_HPP
