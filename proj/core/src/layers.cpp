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

#include "msenti/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msenti/error.hpp"

namespace msenti::nn {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw InvariantError(what);
    }
}

/// out[h] += sum_k m[h][k] * v[k]
void matvec_add(const Tensor& m, std::span<const double> v, std::span<double> out) {
    const std::size_t rows = m.dim(0);
    const std::size_t cols = m.dim(1);
    const double* a = m.raw();
    for (std::size_t h = 0; h < rows; ++h) {
        const double* row = a + h * cols;
        double s = 0.0;
        for (std::size_t k = 0; k < cols; ++k) {
            s += row[k] * v[k];
        }
        out[h] += s;
    }
}

/// out[k] += sum_h m[h][k] * v[h]
void matvec_t_add(const Tensor& m, std::span<const double> v, std::span<double> out) {
    const std::size_t rows = m.dim(0);
    const std::size_t cols = m.dim(1);
    const double* a = m.raw();
    for (std::size_t h = 0; h < rows; ++h) {
        const double* row = a + h * cols;
        const double vh = v[h];
        if (vh == 0.0) {
            continue;
        }
        for (std::size_t k = 0; k < cols; ++k) {
            out[k] += row[k] * vh;
        }
    }
}

/// m[h][k] += u[h] * v[k]
void outer_add(Tensor& m, std::span<const double> u, std::span<const double> v) {
    const std::size_t rows = m.dim(0);
    const std::size_t cols = m.dim(1);
    double* a = m.raw();
    for (std::size_t h = 0; h < rows; ++h) {
        const double uh = u[h];
        if (uh == 0.0) {
            continue;
        }
        double* row = a + h * cols;
        for (std::size_t k = 0; k < cols; ++k) {
            row[k] += uh * v[k];
        }
    }
}

} // namespace

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Tensor embed(std::span<const std::int32_t> indices, const Tensor& table) {
    require(table.rank() == 2, "embedding table must be rank 2");
    const std::size_t vocab = table.dim(0);
    const std::size_t d = table.dim(1);
    const std::size_t len = indices.size();
    Tensor q({d, len});
    for (std::size_t i = 0; i < len; ++i) {
        const auto idx = indices[i];
        if (idx < 0 || static_cast<std::size_t>(idx) >= vocab) {
            throw InputError("character index " + std::to_string(idx) +
                             " out of range for embedding table of " + std::to_string(vocab) +
                             " rows");
        }
        const auto row = table.row(static_cast<std::size_t>(idx));
        for (std::size_t r = 0; r < d; ++r) {
            q(r, i) = row[r];
        }
    }
    return q;
}

void embed_backward(std::span<const std::int32_t> indices, const Tensor& grad_q,
                    Tensor& grad_table) {
    const std::size_t d = grad_table.dim(1);
    require(grad_q.rank() == 2 && grad_q.dim(0) == d && grad_q.dim(1) == indices.size(),
            "embedding gradient shape mismatch");
    for (std::size_t i = 0; i < indices.size(); ++i) {
        auto row = grad_table.row(static_cast<std::size_t>(indices[i]));
        for (std::size_t r = 0; r < d; ++r) {
            row[r] += grad_q(r, i);
        }
    }
}

Tensor conv1d_relu(const Tensor& q, const Tensor& weight, const Tensor& bias) {
    require(q.rank() == 2 && weight.rank() == 3 && bias.rank() == 1,
            "conv1d_relu expects q (d, L), weight (F, d, m), bias (F)");
    const std::size_t d = q.dim(0);
    const std::size_t len = q.dim(1);
    const std::size_t filters = weight.dim(0);
    const std::size_t m = weight.dim(2);
    require(weight.dim(1) == d && bias.dim(0) == filters, "conv1d_relu shape mismatch");
    if (len < m) {
        throw InputError("sequence length " + std::to_string(len) +
                         " is shorter than the filter width " + std::to_string(m));
    }
    const std::size_t width = len - m + 1;
    Tensor f({filters, width});
    for (std::size_t k = 0; k < filters; ++k) {
        auto out = f.row(k);
        std::fill(out.begin(), out.end(), bias[k]);
        for (std::size_t r = 0; r < d; ++r) {
            const double* qrow = q.raw() + r * len;
            for (std::size_t j = 0; j < m; ++j) {
                const double w = weight(k, r, j);
                const double* src = qrow + j;
                for (std::size_t i = 0; i < width; ++i) {
                    out[i] += w * src[i];
                }
            }
        }
        for (double& v : out) {
            v = v > 0.0 ? v : 0.0;
        }
    }
    return f;
}

Tensor conv1d_relu_backward(const Tensor& q, const Tensor& weight, const Tensor& f,
                            const Tensor& grad_f, Tensor& grad_weight, Tensor& grad_bias) {
    const std::size_t d = q.dim(0);
    const std::size_t len = q.dim(1);
    const std::size_t filters = weight.dim(0);
    const std::size_t m = weight.dim(2);
    const std::size_t width = len - m + 1;
    require(f.shape() == grad_f.shape() && f.dim(0) == filters && f.dim(1) == width,
            "conv1d_relu_backward shape mismatch");
    Tensor grad_q({d, len});
    std::vector<double> dz(width);
    for (std::size_t k = 0; k < filters; ++k) {
        const auto fk = f.row(k);
        const auto gk = grad_f.row(k);
        bool any = false;
        double bsum = 0.0;
        for (std::size_t i = 0; i < width; ++i) {
            dz[i] = fk[i] > 0.0 ? gk[i] : 0.0;
            bsum += dz[i];
            any = any || dz[i] != 0.0;
        }
        grad_bias[k] += bsum;
        if (!any) {
            continue;
        }
        for (std::size_t r = 0; r < d; ++r) {
            const double* qrow = q.raw() + r * len;
            double* gqrow = grad_q.raw() + r * len;
            for (std::size_t j = 0; j < m; ++j) {
                const double w = weight(k, r, j);
                double acc = 0.0;
                for (std::size_t i = 0; i < width; ++i) {
                    acc += dz[i] * qrow[i + j];
                    gqrow[i + j] += w * dz[i];
                }
                grad_weight(k, r, j) += acc;
            }
        }
    }
    return grad_q;
}

PoolResult maxpool(const Tensor& f, std::size_t p) {
    require(f.rank() == 2, "maxpool expects a rank-2 feature map");
    if (p == 0) {
        throw InputError("pool size must be >= 1");
    }
    const std::size_t rows = f.dim(0);
    const std::size_t width = f.dim(1);
    if (width < p) {
        throw InputError("feature map width " + std::to_string(width) +
                         " is smaller than the pool size " + std::to_string(p));
    }
    const std::size_t out_width = width / p;
    PoolResult result{Tensor({rows, out_width}), std::vector<std::size_t>(rows * out_width)};
    for (std::size_t k = 0; k < rows; ++k) {
        const auto fk = f.row(k);
        for (std::size_t t = 0; t < out_width; ++t) {
            std::size_t best = t * p;
            for (std::size_t j = t * p + 1; j < (t + 1) * p; ++j) {
                if (fk[j] > fk[best]) {
                    best = j;
                }
            }
            result.pooled(k, t) = fk[best];
            result.argmax[k * out_width + t] = best;
        }
    }
    return result;
}

Tensor maxpool_backward(const PoolResult& pool, const Shape& f_shape, const Tensor& grad_pooled) {
    require(grad_pooled.shape() == pool.pooled.shape(), "maxpool_backward shape mismatch");
    Tensor grad_f(f_shape);
    const std::size_t rows = pool.pooled.dim(0);
    const std::size_t out_width = pool.pooled.dim(1);
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t t = 0; t < out_width; ++t) {
            grad_f(k, pool.argmax[k * out_width + t]) += grad_pooled(k, t);
        }
    }
    return grad_f;
}

void lstm_step_into(std::span<const double> y, std::span<const double> h_prev,
                    std::span<const double> c_prev, const ModelParams& model, LstmStepView out) {
    const std::size_t hidden = model.hp.hidden;
    if (y.size() != model.hp.lstm_input_size() || h_prev.size() != hidden ||
        c_prev.size() != hidden || out.hidden.size() != hidden) {
        throw InvariantError("lstm_step shape mismatch");
    }
    const std::array<std::span<double>, kNumGates> pre = {out.input_gate, out.forget_gate,
                                                          out.candidate, out.output_gate};
    for (std::size_t g = 0; g < kNumGates; ++g) {
        std::copy(model.lstm_b[g].data().begin(), model.lstm_b[g].data().end(), pre[g].begin());
        matvec_add(model.lstm_w[g], y, pre[g]);
        matvec_add(model.lstm_u[g], h_prev, pre[g]);
    }
    for (std::size_t h = 0; h < hidden; ++h) {
        const double i = sigmoid(out.input_gate[h]);
        const double f = sigmoid(out.forget_gate[h]);
        const double g = std::tanh(out.candidate[h]);
        const double c = f * c_prev[h] + i * g;
        double o_pre = out.output_gate[h];
        if (model.hp.peephole) {
            o_pre += model.lstm_peephole[h] * c;
        }
        const double o = sigmoid(o_pre);
        out.input_gate[h] = i;
        out.forget_gate[h] = f;
        out.candidate[h] = g;
        out.output_gate[h] = o;
        out.cell[h] = c;
        out.hidden[h] = o * std::tanh(c);
    }
}

LstmStep lstm_step(std::span<const double> y, std::span<const double> h_prev,
                   std::span<const double> c_prev, const ModelParams& model) {
    const std::size_t hidden = model.hp.hidden;
    LstmStep s{std::vector<double>(hidden), std::vector<double>(hidden),
               std::vector<double>(hidden), std::vector<double>(hidden),
               std::vector<double>(hidden), std::vector<double>(hidden)};
    lstm_step_into(y, h_prev, c_prev, model,
                   {s.input_gate, s.forget_gate, s.candidate, s.output_gate, s.cell, s.hidden});
    return s;
}

void lstm_step_backward(std::span<const double> y, std::span<const double> h_prev,
                        std::span<const double> c_prev, const LstmStepView& step,
                        std::span<const double> dh, std::span<const double> dc,
                        const ModelParams& model, Gradients& grads, std::span<double> dy,
                        std::span<double> dh_prev, std::span<double> dc_prev) {
    const std::size_t hidden = model.hp.hidden;
    std::array<std::vector<double>, kNumGates> da;
    for (auto& v : da) {
        v.assign(hidden, 0.0);
    }
    for (std::size_t h = 0; h < hidden; ++h) {
        const double i = step.input_gate[h];
        const double f = step.forget_gate[h];
        const double g = step.candidate[h];
        const double o = step.output_gate[h];
        const double c = step.cell[h];
        const double tc = std::tanh(c);

        const double d_o = dh[h] * tc;
        const double da_o = d_o * o * (1.0 - o);
        double d_c = dc[h] + dh[h] * o * (1.0 - tc * tc);
        if (model.hp.peephole) {
            d_c += da_o * model.lstm_peephole[h];
            grads.lstm_peephole[h] += da_o * c;
        }
        da[kOutputGate][h] = da_o;
        da[kForgetGate][h] = d_c * c_prev[h] * f * (1.0 - f);
        da[kInputGate][h] = d_c * g * i * (1.0 - i);
        da[kCandidate][h] = d_c * i * (1.0 - g * g);
        dc_prev[h] += d_c * f;
    }
    for (std::size_t g = 0; g < kNumGates; ++g) {
        auto& db = grads.lstm_b[g];
        for (std::size_t h = 0; h < hidden; ++h) {
            db[h] += da[g][h];
        }
        outer_add(grads.lstm_w[g], da[g], y);
        outer_add(grads.lstm_u[g], da[g], h_prev);
        matvec_t_add(model.lstm_w[g], da[g], dy);
        matvec_t_add(model.lstm_u[g], da[g], dh_prev);
    }
}

Tensor softmax(const Tensor& logits) {
    require(logits.rank() == 2, "softmax expects (batch, classes)");
    Tensor p(logits.shape());
    for (std::size_t b = 0; b < logits.dim(0); ++b) {
        const auto in = logits.row(b);
        auto out = p.row(b);
        const double mx = *std::max_element(in.begin(), in.end());
        double z = 0.0;
        for (std::size_t c = 0; c < in.size(); ++c) {
            out[c] = std::exp(in[c] - mx);
            z += out[c];
        }
        for (double& v : out) {
            v /= z;
        }
    }
    return p;
}

SoftmaxXent softmax_xent(const Tensor& logits, std::span<const std::size_t> labels) {
    require(logits.rank() == 2 && logits.dim(0) == labels.size(),
            "softmax_xent: one label per logit row required");
    if (labels.empty()) {
        throw InputError("softmax_xent on an empty batch");
    }
    SoftmaxXent out{0.0, softmax(logits)};
    const std::size_t classes = logits.dim(1);
    for (std::size_t b = 0; b < labels.size(); ++b) {
        if (labels[b] >= classes) {
            throw InputError("label " + std::to_string(labels[b]) + " out of range");
        }
        // log-softmax directly from the logits keeps the loss exact when p
        // underflows.
        const auto row = logits.row(b);
        const double mx = *std::max_element(row.begin(), row.end());
        double z = 0.0;
        for (double v : row) {
            z += std::exp(v - mx);
        }
        out.loss += -(row[labels[b]] - mx - std::log(z));
    }
    out.loss /= static_cast<double>(labels.size());
    return out;
}

Tensor softmax_xent_grad(const Tensor& probabilities, std::span<const std::size_t> labels) {
    Tensor g = probabilities;
    const double inv = 1.0 / static_cast<double>(labels.size());
    for (std::size_t b = 0; b < labels.size(); ++b) {
        g(b, labels[b]) -= 1.0;
        for (double& v : g.row(b)) {
            v *= inv;
        }
    }
    return g;
}

} // namespace msenti::nn
