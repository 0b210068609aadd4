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

#include "msenti/adamax.hpp"

#include <algorithm>
#include <cmath>

#include "msenti/error.hpp"

namespace msenti::train {

AdamaxState::AdamaxState(const std::vector<nn::Shape>& shapes, AdamaxConfig cfg)
    : config(cfg) {
    for (const auto& shape : shapes) {
        first_moment.emplace_back(shape);
        infinity_norm.emplace_back(shape);
    }
}

AdamaxState::AdamaxState(const nn::ModelParams& params, AdamaxConfig cfg) : config(cfg) {
    for (const auto& ref : params.named()) {
        first_moment.emplace_back(ref.tensor->shape());
        infinity_norm.emplace_back(ref.tensor->shape());
    }
}

void adamax_step(std::span<const nn::NamedRef<nn::Tensor>> params,
                 std::span<const nn::NamedRef<const nn::Tensor>> grads, AdamaxState& state) {
    if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
        throw InvariantError("adamax_step: parameter, gradient and state counts differ");
    }
    for (std::size_t n = 0; n < params.size(); ++n) {
        const auto& g = *grads[n].tensor;
        if (params[n].tensor->shape() != g.shape() ||
            state.first_moment[n].shape() != g.shape()) {
            throw InvariantError("adamax_step: shape mismatch for '" + params[n].name + "'");
        }
        if (!g.all_finite()) {
            throw NumericError("non-finite gradient in tensor '" + grads[n].name + "'");
        }
    }

    ++state.step;
    const double beta1 = state.config.beta1;
    const double beta2 = state.config.beta2;
    const double step_size =
        state.config.learning_rate / (1.0 - std::pow(beta1, static_cast<double>(state.step)));
    for (std::size_t n = 0; n < params.size(); ++n) {
        auto theta = params[n].tensor->data();
        const auto g = grads[n].tensor->data();
        auto m = state.first_moment[n].data();
        auto u = state.infinity_norm[n].data();
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
            u[i] = std::max(beta2 * u[i], std::abs(g[i]));
            if (u[i] != 0.0) {
                theta[i] -= step_size * m[i] / u[i];
            }
        }
    }
}

void adamax_step(nn::ModelParams& params, const nn::Gradients& grads, AdamaxState& state) {
    if (!(params.hp == grads.hp)) {
        throw InvariantError("adamax_step: gradients belong to a different architecture");
    }
    const auto p = params.named();
    const auto g = grads.named();
    adamax_step(std::span<const nn::NamedRef<nn::Tensor>>(p),
                std::span<const nn::NamedRef<const nn::Tensor>>(g), state);
    ++params.revision;
}

} // namespace msenti::train
