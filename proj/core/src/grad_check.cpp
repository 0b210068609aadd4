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

#include "msenti/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "msenti/error.hpp"
#include "msenti/network.hpp"
#include "msenti/rng.hpp"

namespace msenti::nn {

double GradCheckReport::max_relative_error() const {
    double worst = 0.0;
    for (const auto& t : tensors) {
        worst = std::max(worst, t.max_relative_error);
    }
    return worst;
}

const TensorCheck& GradCheckReport::at(std::string_view name) const {
    for (const auto& t : tensors) {
        if (t.name == name) {
            return t;
        }
    }
    throw InputError("no tensor named '" + std::string(name) + "' in report");
}

bool operator==(const GradCheckReport& a, const GradCheckReport& b) {
    if (a.tensors.size() != b.tensors.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.tensors.size(); ++i) {
        const auto& x = a.tensors[i];
        const auto& y = b.tensors[i];
        if (x.name != y.name || x.elements != y.elements ||
            x.max_relative_error != y.max_relative_error) {
            return false;
        }
    }
    return true;
}

GradCheckReport grad_check(const ModelParams& model,
                           std::span<const corpus::EncodedSentence> batch,
                           std::span<const std::size_t> labels, double epsilon) {
    const ForwardTrace trace = forward(model, batch);
    const BackwardResult analytic = backward(trace, model, labels);

    ModelParams probe = model;
    GradCheckReport report;
    auto probe_refs = probe.named();
    const auto grad_refs = analytic.grads.named();
    for (std::size_t n = 0; n < probe_refs.size(); ++n) {
        Tensor& param = *probe_refs[n].tensor;
        const Tensor& grad = *grad_refs[n].tensor;
        TensorCheck check{probe_refs[n].name, param.size(), 0.0};
        for (std::size_t i = 0; i < param.size(); ++i) {
            const double saved = param[i];
            param[i] = saved + epsilon;
            const double plus = batch_loss(probe, batch, labels);
            param[i] = saved - epsilon;
            const double minus = batch_loss(probe, batch, labels);
            param[i] = saved;
            const double fd = (plus - minus) / (2.0 * epsilon);
            const double g = grad[i];
            const double denom = std::max({std::abs(g), std::abs(fd), kGradCheckFloor});
            check.max_relative_error = std::max(check.max_relative_error, std::abs(g - fd) / denom);
        }
        report.tensors.push_back(std::move(check));
    }
    return report;
}

GradCheckReport grad_check(const Hyperparams& hp, std::uint64_t seed, double epsilon,
                           std::size_t batch_size) {
    ModelParams model = ModelParams::initialize(hp, seed);
    if (model.parameter_count() > kGradCheckMaxParams) {
        throw InputError("grad_check model has " + std::to_string(model.parameter_count()) +
                         " parameters; limit is " + std::to_string(kGradCheckMaxParams));
    }
    Xoshiro256 rng(seed ^ 0x5eed'c4ec'0000'0001ULL);
    auto jitter = [&rng](Tensor& t) {
        for (double& v : t.data()) {
            v += rng.uniform(-0.5, 0.5);
        }
    };
    if (hp.kind == ArchitectureKind::subword) {
        jitter(model.conv_bias);
    }
    for (auto& b : model.lstm_b) {
        jitter(b);
    }
    if (hp.peephole) {
        jitter(model.lstm_peephole);
    }
    jitter(model.dense_bias);

    std::vector<corpus::EncodedSentence> batch(batch_size);
    std::vector<std::size_t> labels(batch_size);
    const auto real_chars = hp.vocab_size - static_cast<std::size_t>(corpus::CharVocab::kFirstChar);
    for (std::size_t b = 0; b < batch_size; ++b) {
        auto& s = batch[b];
        s.true_length = 1 + static_cast<std::size_t>(rng.below(hp.max_len));
        s.indices.assign(hp.max_len, corpus::CharVocab::kPad);
        for (std::size_t i = 0; i < s.true_length; ++i) {
            s.indices[i] = real_chars == 0
                               ? corpus::CharVocab::kOov
                               : static_cast<std::int32_t>(corpus::CharVocab::kFirstChar +
                                                           rng.below(real_chars));
        }
        labels[b] = static_cast<std::size_t>(rng.below(kNumClasses));
    }
    return grad_check(model, batch, labels, epsilon);
}

} // namespace msenti::nn
