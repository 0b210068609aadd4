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

#include "msenti/network.hpp"

#include <algorithm>
#include <string>

#include "msenti/error.hpp"

namespace msenti::nn {

namespace {

LstmStepView make_view(const Tensor& ig, const Tensor& fg, const Tensor& cand, const Tensor& og,
                       const Tensor& cell, const Tensor& hid, std::size_t t) {
    // The trace is logically const; the view type is shared with the
    // forward writer, hence the casts.
    auto row = [t](const Tensor& m) {
        auto r = m.row(t);
        return std::span<double>(const_cast<double*>(r.data()), r.size());
    };
    return {row(ig), row(fg), row(cand), row(og), row(cell), row(hid)};
}

ExampleTrace forward_example(const ModelParams& model, const corpus::EncodedSentence& sentence) {
    const Hyperparams& hp = model.hp;
    if (sentence.indices.size() != hp.max_len) {
        throw InputError("encoded sentence has length " + std::to_string(sentence.indices.size()) +
                         ", model expects " + std::to_string(hp.max_len));
    }
    ExampleTrace ex;
    ex.indices = sentence.indices;
    ex.q = embed(ex.indices, model.embedding);

    const std::size_t steps = hp.steps();
    const std::size_t in = hp.lstm_input_size();
    ex.inputs = Tensor({steps, in});
    if (hp.kind == ArchitectureKind::subword) {
        ex.features = conv1d_relu(ex.q, model.conv_weight, model.conv_bias);
        ex.pool = maxpool(ex.features, hp.pool_size);
        for (std::size_t t = 0; t < steps; ++t) {
            for (std::size_t k = 0; k < in; ++k) {
                ex.inputs(t, k) = ex.pool.pooled(k, t);
            }
        }
    } else {
        for (std::size_t t = 0; t < steps; ++t) {
            for (std::size_t r = 0; r < in; ++r) {
                ex.inputs(t, r) = ex.q(r, t);
            }
        }
    }

    const Shape state{steps, hp.hidden};
    ex.input_gate = Tensor(state);
    ex.forget_gate = Tensor(state);
    ex.candidate = Tensor(state);
    ex.output_gate = Tensor(state);
    ex.cell = Tensor(state);
    ex.hidden = Tensor(state);
    const std::vector<double> zeros(hp.hidden, 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
        const std::span<const double> h_prev = t == 0 ? std::span<const double>(zeros)
                                                      : ex.hidden.row(t - 1);
        const std::span<const double> c_prev = t == 0 ? std::span<const double>(zeros)
                                                      : ex.cell.row(t - 1);
        lstm_step_into(ex.inputs.row(t), h_prev, c_prev, model, ex.step(t));
    }
    return ex;
}

void dense_forward(const ModelParams& model, std::span<const double> h, std::span<double> out) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        double s = model.dense_bias[c];
        for (std::size_t j = 0; j < h.size(); ++j) {
            s += h[j] * model.dense_weight(j, c);
        }
        out[c] = s;
    }
}

void check_finite(const Tensor& logits) {
    if (!logits.all_finite()) {
        throw InvariantError("forward pass produced non-finite logits");
    }
}

} // namespace

LstmStepView ExampleTrace::step(std::size_t t) {
    return make_view(input_gate, forget_gate, candidate, output_gate, cell, hidden, t);
}

LstmStepView ExampleTrace::step(std::size_t t) const {
    return make_view(input_gate, forget_gate, candidate, output_gate, cell, hidden, t);
}

ForwardTrace forward(const ModelParams& model, std::span<const corpus::EncodedSentence> batch) {
    if (batch.empty()) {
        throw InputError("forward called with an empty batch");
    }
    ForwardTrace trace;
    trace.hp = model.hp;
    trace.model = &model;
    trace.revision = model.revision;
    trace.examples.reserve(batch.size());
    trace.logits = Tensor({batch.size(), kNumClasses});
    const std::size_t last = model.hp.steps() - 1;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        trace.examples.push_back(forward_example(model, batch[b]));
        dense_forward(model, trace.examples.back().hidden.row(last), trace.logits.row(b));
    }
    check_finite(trace.logits);
    return trace;
}

Tensor predict_logits(const ModelParams& model, std::span<const corpus::EncodedSentence> batch) {
    Tensor logits({batch.size(), kNumClasses});
    const std::size_t last = model.hp.steps() - 1;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const ExampleTrace ex = forward_example(model, batch[b]);
        dense_forward(model, ex.hidden.row(last), logits.row(b));
    }
    check_finite(logits);
    return logits;
}

BackwardResult backward(const ForwardTrace& trace, const ModelParams& model,
                        std::span<const std::size_t> labels) {
    if (trace.model != &model || trace.revision != model.revision || !(trace.hp == model.hp)) {
        throw InvariantError("stale or mismatched forward trace");
    }
    if (labels.size() != trace.batch_size()) {
        throw InvariantError("backward: " + std::to_string(labels.size()) + " labels for a batch of " +
                             std::to_string(trace.batch_size()));
    }
    const Hyperparams& hp = model.hp;
    const auto xent = softmax_xent(trace.logits, labels);
    const Tensor dlogits = softmax_xent_grad(xent.probabilities, labels);

    BackwardResult result{xent.loss, xent.probabilities, Gradients::zeros(hp)};
    Gradients& grads = result.grads;

    const std::size_t steps = hp.steps();
    const std::size_t hidden = hp.hidden;
    const std::size_t in = hp.lstm_input_size();
    const std::vector<double> zeros(hidden, 0.0);
    std::vector<double> dh(hidden);
    std::vector<double> dc(hidden);
    std::vector<double> dh_prev(hidden);
    std::vector<double> dc_prev(hidden);

    for (std::size_t b = 0; b < trace.batch_size(); ++b) {
        const ExampleTrace& ex = trace.examples[b];
        const auto dl = dlogits.row(b);
        const auto h_last = ex.hidden.row(steps - 1);

        for (std::size_t c = 0; c < kNumClasses; ++c) {
            grads.dense_bias[c] += dl[c];
        }
        for (std::size_t j = 0; j < hidden; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < kNumClasses; ++c) {
                grads.dense_weight(j, c) += h_last[j] * dl[c];
                s += model.dense_weight(j, c) * dl[c];
            }
            dh[j] = s;
        }
        std::fill(dc.begin(), dc.end(), 0.0);

        Tensor dinputs({steps, in});
        for (std::size_t t = steps; t-- > 0;) {
            const std::span<const double> h_prev = t == 0 ? std::span<const double>(zeros)
                                                          : ex.hidden.row(t - 1);
            const std::span<const double> c_prev = t == 0 ? std::span<const double>(zeros)
                                                          : ex.cell.row(t - 1);
            std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
            std::fill(dc_prev.begin(), dc_prev.end(), 0.0);
            lstm_step_backward(ex.inputs.row(t), h_prev, c_prev, ex.step(t), dh, dc, model, grads,
                               dinputs.row(t), dh_prev, dc_prev);
            dh.swap(dh_prev);
            dc.swap(dc_prev);
        }

        Tensor dq;
        if (hp.kind == ArchitectureKind::subword) {
            Tensor dpooled(ex.pool.pooled.shape());
            for (std::size_t t = 0; t < steps; ++t) {
                for (std::size_t k = 0; k < in; ++k) {
                    dpooled(k, t) = dinputs(t, k);
                }
            }
            const Tensor df = maxpool_backward(ex.pool, ex.features.shape(), dpooled);
            dq = conv1d_relu_backward(ex.q, model.conv_weight, ex.features, df, grads.conv_weight,
                                      grads.conv_bias);
        } else {
            dq = Tensor(ex.q.shape());
            for (std::size_t t = 0; t < steps; ++t) {
                for (std::size_t r = 0; r < in; ++r) {
                    dq(r, t) = dinputs(t, r);
                }
            }
        }
        embed_backward(ex.indices, dq, grads.embedding);
    }
    return result;
}

double batch_loss(const ModelParams& model, std::span<const corpus::EncodedSentence> batch,
                  std::span<const std::size_t> labels) {
    return softmax_xent(predict_logits(model, batch), labels).loss;
}

} // namespace msenti::nn
