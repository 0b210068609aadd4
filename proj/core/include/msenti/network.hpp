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

#ifndef MSENTI_NETWORK_HPP
#define MSENTI_NETWORK_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "msenti/corpus.hpp"
#include "msenti/layers.hpp"
#include "msenti/model.hpp"
#include "msenti/tensor.hpp"

namespace msenti::nn {

/// Activations of one sentence, kept for the backward pass.
struct ExampleTrace {
    std::vector<std::int32_t> indices;
    Tensor q;                         ///< (d, L)
    Tensor features;                  ///< f, (F, L - m + 1); subword only
    PoolResult pool;                  ///< subword only
    Tensor inputs;                    ///< (T, in) LSTM inputs, position-major
    Tensor input_gate;                ///< (T, H)
    Tensor forget_gate;
    Tensor candidate;
    Tensor output_gate;
    Tensor cell;
    Tensor hidden;

    LstmStepView step(std::size_t t);
    LstmStepView step(std::size_t t) const;
};

struct ForwardTrace {
    Hyperparams hp;
    const ModelParams* model = nullptr;
    std::uint64_t revision = 0;
    std::vector<ExampleTrace> examples;
    Tensor logits; ///< (B, 3)

    std::size_t batch_size() const { return examples.size(); }
};

/// Runs the architecture selected by model.hp.kind over every sentence.
/// Each sentence must already be encoded to exactly hp.max_len indices.
ForwardTrace forward(const ModelParams& model, std::span<const corpus::EncodedSentence> batch);

/// Logits only; keeps one example's activations alive at a time.
Tensor predict_logits(const ModelParams& model, std::span<const corpus::EncodedSentence> batch);

struct BackwardResult {
    double loss = 0.0;
    Tensor probabilities;
    Gradients grads;
};

/// Exact reverse-mode gradients of the mean cross-entropy loss. The trace
/// must come from forward() on this very model at its current revision.
BackwardResult backward(const ForwardTrace& trace, const ModelParams& model,
                        std::span<const std::size_t> labels);

/// Mean loss of a batch without gradients.
double batch_loss(const ModelParams& model, std::span<const corpus::EncodedSentence> batch,
                  std::span<const std::size_t> labels);

} // namespace msenti::nn

#endif // MSENTI_NETWORK_HPP
