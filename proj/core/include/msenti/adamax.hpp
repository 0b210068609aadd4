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

#ifndef MSENTI_ADAMAX_HPP
#define MSENTI_ADAMAX_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "msenti/model.hpp"
#include "msenti/tensor.hpp"

namespace msenti::train {

struct AdamaxConfig {
    double learning_rate = 0.002;
    double beta1 = 0.9;
    double beta2 = 0.999;
};

/**
 * Optimizer state for Adamax, the infinity-norm variant of Adam:
 *
 *   t <- t + 1
 *   m <- beta1 m + (1 - beta1) g
 *   u <- max(beta2 u, |g|)
 *   theta <- theta - (alpha / (1 - beta1^t)) m / u
 *
 * Elements whose u is exactly zero are left untouched.
 */
struct AdamaxState {
    AdamaxConfig config;
    std::uint64_t step = 0;
    std::vector<nn::Tensor> first_moment;
    std::vector<nn::Tensor> infinity_norm;

    AdamaxState() = default;
    AdamaxState(const std::vector<nn::Shape>& shapes, AdamaxConfig config);
    AdamaxState(const nn::ModelParams& params, AdamaxConfig config);
};

/// Tensor-level update. params, grads and the state must agree in count
/// and shape. Throws NumericError naming the first non-finite gradient.
void adamax_step(std::span<const nn::NamedRef<nn::Tensor>> params,
                 std::span<const nn::NamedRef<const nn::Tensor>> grads, AdamaxState& state);

/// Model-level update; bumps params.revision.
void adamax_step(nn::ModelParams& params, const nn::Gradients& grads, AdamaxState& state);

} // namespace msenti::train

#endif // MSENTI_ADAMAX_HPP
