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

#ifndef MSENTI_GRAD_CHECK_HPP
#define MSENTI_GRAD_CHECK_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "msenti/corpus.hpp"
#include "msenti/model.hpp"

namespace msenti::nn {

struct TensorCheck {
    std::string name;
    std::size_t elements = 0;
    /// max over elements of |g_analytic - g_fd| / max(|g_analytic|, |g_fd|, 1e-8)
    double max_relative_error = 0.0;
};

struct GradCheckReport {
    std::vector<TensorCheck> tensors;

    double max_relative_error() const;
    const TensorCheck& at(std::string_view name) const;

    friend bool operator==(const GradCheckReport& a, const GradCheckReport& b);
};

inline constexpr double kGradCheckFloor = 1e-8;
inline constexpr std::size_t kGradCheckMaxParams = 5000;

/// Compares backward() against central finite differences for every
/// element of every tensor.
GradCheckReport grad_check(const ModelParams& model,
                           std::span<const corpus::EncodedSentence> batch,
                           std::span<const std::size_t> labels, double epsilon = 1e-4);

/// Seeded harness: builds a model from hp (vocab_size must be set),
/// jitters biases and the peephole away from their constant initial
/// values, draws a random batch of padded sentences and labels, and runs
/// the check. Models above kGradCheckMaxParams are rejected.
GradCheckReport grad_check(const Hyperparams& hp, std::uint64_t seed, double epsilon = 1e-4,
                           std::size_t batch_size = 3);

} // namespace msenti::nn

#endif // MSENTI_GRAD_CHECK_HPP
