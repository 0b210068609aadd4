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

#ifndef MSENTI_LAYERS_HPP
#define MSENTI_LAYERS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "msenti/model.hpp"
#include "msenti/tensor.hpp"

namespace msenti::nn {

double sigmoid(double x);

/// Character matrix Q of shape (d, L): column i is the embedding row of
/// indices[i]. Pad positions read the pad row like any other index.
Tensor embed(std::span<const std::int32_t> indices, const Tensor& table);
/// Scatter-adds the columns of grad_q into the rows of grad_table.
void embed_backward(std::span<const std::int32_t> indices, const Tensor& grad_q,
                    Tensor& grad_table);

/// Valid 1-D convolution over positions followed by ReLU.
/// q (d, L), weight (F, d, m), bias (F) -> f (F, L - m + 1) with
/// f[k][i] = max(0, b[k] + sum_{r, j} weight[k][r][j] * q[r][i + j]).
Tensor conv1d_relu(const Tensor& q, const Tensor& weight, const Tensor& bias);
/// Accumulates into grad_weight / grad_bias and returns dLoss/dq. The ReLU
/// mask is read off f (f > 0), so no separate pre-activation is needed.
Tensor conv1d_relu_backward(const Tensor& q, const Tensor& weight, const Tensor& f,
                            const Tensor& grad_f, Tensor& grad_weight, Tensor& grad_bias);

struct PoolResult {
    Tensor pooled;                   ///< (F, floor(W / p))
    std::vector<std::size_t> argmax; ///< column in f that won each window, row-major
};

/// Non-overlapping max-pool of width p and stride p along each row. A
/// trailing remainder narrower than p is dropped. Ties go to the first
/// maximum.
PoolResult maxpool(const Tensor& f, std::size_t p);
/// Routes each pooled gradient to the recorded argmax column.
Tensor maxpool_backward(const PoolResult& pool, const Shape& f_shape, const Tensor& grad_pooled);

/// Per-gate activations of one LSTM timestep, each of length hidden.
struct LstmStep {
    std::vector<double> input_gate;
    std::vector<double> forget_gate;
    std::vector<double> candidate;
    std::vector<double> output_gate;
    std::vector<double> cell;
    std::vector<double> hidden;
};

/// Mutable views into preallocated per-step buffers.
struct LstmStepView {
    std::span<double> input_gate;
    std::span<double> forget_gate;
    std::span<double> candidate;
    std::span<double> output_gate;
    std::span<double> cell;
    std::span<double> hidden;
};

/**
 * One step of the peephole LSTM cell:
 *
 *   I = sigmoid(W_i y + U_i h + b_i)
 *   F = sigmoid(W_f y + U_f h + b_f)
 *   G = tanh(W_c y + U_c h + b_c)
 *   C = F * C_prev + I * G
 *   O = sigmoid(W_o y + U_o h + V_o * C + b_o)
 *   h = O * tanh(C)
 *
 * The V_o term is dropped when the model's peephole flag is off.
 */
LstmStep lstm_step(std::span<const double> y, std::span<const double> h_prev,
                   std::span<const double> c_prev, const ModelParams& model);
void lstm_step_into(std::span<const double> y, std::span<const double> h_prev,
                    std::span<const double> c_prev, const ModelParams& model, LstmStepView out);

/// Backpropagates one step. dh and dc are the gradients arriving at h_t and
/// C_t; parameter gradients are accumulated into grads and the input,
/// previous-hidden and previous-cell gradients are added into dy, dh_prev,
/// dc_prev (which the caller zeroes).
void lstm_step_backward(std::span<const double> y, std::span<const double> h_prev,
                        std::span<const double> c_prev, const LstmStepView& step,
                        std::span<const double> dh, std::span<const double> dc,
                        const ModelParams& model, Gradients& grads, std::span<double> dy,
                        std::span<double> dh_prev, std::span<double> dc_prev);

/// Row-wise softmax, stabilized by subtracting the row maximum.
Tensor softmax(const Tensor& logits);

struct SoftmaxXent {
    double loss = 0.0;       ///< mean over the batch of -ln p[label]
    Tensor probabilities;    ///< (B, classes)
};

SoftmaxXent softmax_xent(const Tensor& logits, std::span<const std::size_t> labels);
/// (p - onehot(label)) / B.
Tensor softmax_xent_grad(const Tensor& probabilities, std::span<const std::size_t> labels);

} // namespace msenti::nn

#endif // MSENTI_LAYERS_HPP
