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

#include "msenti/linear.hpp"

#include <cmath>
#include <numeric>

#include "msenti/error.hpp"
#include "msenti/metrics.hpp"
#include "msenti/rng.hpp"

namespace msenti::baselines {

namespace {

constexpr double kRescaleBelow = 1e-9;

void check_dataset(const Dataset& train) {
    if (train.size() == 0) {
        throw InputError("cannot fit a classifier on an empty training set");
    }
    if (train.x.size() != train.y.size()) {
        throw InputError("feature and label counts differ");
    }
    for (std::size_t y : train.y) {
        if (y >= corpus::kNumClasses) {
            throw InputError("class index out of range");
        }
    }
}

std::vector<int> one_vs_rest(std::span<const std::size_t> y, std::size_t positive) {
    std::vector<int> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = y[i] == positive ? 1 : -1;
    }
    return out;
}

} // namespace

BinaryLinear train_hinge_binary(std::span<const SparseVec> x, std::span<const int> y,
                                std::size_t dimension, double lambda, std::size_t epochs,
                                std::uint64_t seed) {
    if (x.empty() || x.size() != y.size()) {
        throw InputError("train_hinge_binary: need one label per non-empty example set");
    }
    if (!(lambda > 0.0)) {
        throw InputError("train_hinge_binary: lambda must be > 0");
    }
    for (const auto& xi : x) {
        if (!xi.empty() && xi.entries().back().index >= dimension) {
            throw InputError("train_hinge_binary: feature index beyond dimension");
        }
    }

    // w = scale * v; the last slot of v is the bias feature.
    std::vector<double> v(dimension + 1, 0.0);
    double scale = 1.0;
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Xoshiro256 rng(seed);
    std::uint64_t t = 0;

    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(std::span(order));
        for (std::size_t i : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double yi = y[i];
            const double margin = yi * scale * (x[i].dot(v) + v[dimension]);

            const double shrink = 1.0 - 1.0 / static_cast<double>(t);
            if (shrink == 0.0) {
                std::fill(v.begin(), v.end(), 0.0);
                scale = 1.0;
            } else {
                scale *= shrink;
            }
            if (margin < 1.0) {
                const double coef = eta * yi / scale;
                for (const auto& e : x[i].entries()) {
                    v[e.index] += coef * e.value;
                }
                v[dimension] += coef;
            }
            if (scale < kRescaleBelow) {
                for (double& vi : v) {
                    vi *= scale;
                }
                scale = 1.0;
            }
        }
    }

    BinaryLinear out;
    out.weights.resize(dimension);
    for (std::size_t j = 0; j < dimension; ++j) {
        out.weights[j] = scale * v[j];
    }
    out.bias = scale * v[dimension];
    return out;
}

LinearModel svm_fit(const Dataset& train, double lambda, std::size_t epochs, std::uint64_t seed) {
    check_dataset(train);
    constexpr std::size_t k = corpus::kNumClasses;
    LinearModel model;
    model.lambda = lambda;
    model.epochs = epochs;
    model.seed = seed;
    model.weights = nn::Tensor({k, train.dimension});
    model.bias = nn::Tensor({k});
    for (std::size_t c = 0; c < k; ++c) {
        const auto yc = one_vs_rest(train.y, c);
        const auto fit = train_hinge_binary(train.x, yc, train.dimension, lambda, epochs, seed + c);
        std::copy(fit.weights.begin(), fit.weights.end(), model.weights.row(c).begin());
        model.bias[c] = fit.bias;
    }
    return model;
}

std::array<double, corpus::kNumClasses> linear_scores(const LinearModel& model, const SparseVec& x) {
    std::array<double, corpus::kNumClasses> s{};
    for (std::size_t c = 0; c < corpus::kNumClasses; ++c) {
        s[c] = x.dot(model.weights.row(c)) + model.bias[c];
    }
    return s;
}

std::size_t svm_predict(const LinearModel& model, const SparseVec& x) {
    return argmax_class(linear_scores(model, x));
}

std::vector<double> log_count_ratio(std::span<const double> pos_counts,
                                    std::span<const double> neg_counts, double alpha) {
    if (pos_counts.size() != neg_counts.size()) {
        throw InputError("log_count_ratio: count vectors differ in length");
    }
    if (!(alpha > 0.0)) {
        throw InputError("log_count_ratio: alpha must be > 0");
    }
    double p_norm = 0.0;
    double q_norm = 0.0;
    for (std::size_t j = 0; j < pos_counts.size(); ++j) {
        p_norm += alpha + pos_counts[j];
        q_norm += alpha + neg_counts[j];
    }
    std::vector<double> r(pos_counts.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        r[j] = std::log(((alpha + pos_counts[j]) / p_norm) / ((alpha + neg_counts[j]) / q_norm));
    }
    return r;
}

SparseVec nb_scale(const SparseVec& x, std::span<const double> ratio) {
    std::vector<SparseEntry> pairs;
    pairs.reserve(x.nnz());
    const SparseVec bin = x.binarized();
    for (const auto& e : bin.entries()) {
        pairs.push_back({e.index, ratio[e.index]});
    }
    return SparseVec::from_pairs(std::move(pairs));
}

NbsvmModel nbsvm_fit(const Dataset& train, double beta, double lambda, double alpha,
                     std::size_t epochs, std::uint64_t seed) {
    check_dataset(train);
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw InputError("nbsvm_fit: beta must lie in [0, 1]");
    }
    constexpr std::size_t k = corpus::kNumClasses;
    std::array<std::size_t, k> present{};
    for (std::size_t y : train.y) {
        ++present[y];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (present[c] == 0) {
            throw InputError("nbsvm_fit: class '" +
                             std::string(corpus::polarity_name(corpus::polarity_from_index(c))) +
                             "' is absent from the training data");
        }
    }

    const std::size_t dim = train.dimension;
    nn::Tensor class_counts({k, dim});
    for (std::size_t i = 0; i < train.size(); ++i) {
        const SparseVec bin = train.x[i].binarized();
        for (const auto& e : bin.entries()) {
            class_counts(train.y[i], e.index) += 1.0;
        }
    }

    NbsvmModel model;
    model.alpha = alpha;
    model.beta = beta;
    model.ratios = nn::Tensor({k, dim});
    model.linear.lambda = lambda;
    model.linear.epochs = epochs;
    model.linear.seed = seed;
    model.linear.weights = nn::Tensor({k, dim});
    model.linear.bias = nn::Tensor({k});

    for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> rest(dim, 0.0);
        for (std::size_t o = 0; o < k; ++o) {
            if (o != c) {
                for (std::size_t j = 0; j < dim; ++j) {
                    rest[j] += class_counts(o, j);
                }
            }
        }
        const auto r = log_count_ratio(class_counts.row(c), rest, alpha);
        std::copy(r.begin(), r.end(), model.ratios.row(c).begin());

        std::vector<SparseVec> scaled;
        scaled.reserve(train.size());
        for (const auto& x : train.x) {
            scaled.push_back(nb_scale(x, r));
        }
        const auto yc = one_vs_rest(train.y, c);
        const auto fit = train_hinge_binary(scaled, yc, dim, lambda, epochs, seed + c);

        double mean_abs = 0.0;
        for (double w : fit.weights) {
            mean_abs += std::abs(w);
        }
        mean_abs = dim == 0 ? 0.0 : mean_abs / static_cast<double>(dim);
        auto out = model.linear.weights.row(c);
        for (std::size_t j = 0; j < dim; ++j) {
            out[j] = (1.0 - beta) * mean_abs + beta * fit.weights[j];
        }
        model.linear.bias[c] = fit.bias;
    }
    return model;
}

std::array<double, corpus::kNumClasses> nbsvm_scores(const NbsvmModel& model, const SparseVec& x) {
    std::array<double, corpus::kNumClasses> s{};
    for (std::size_t c = 0; c < corpus::kNumClasses; ++c) {
        s[c] = nb_scale(x, model.ratios.row(c)).dot(model.linear.weights.row(c)) +
               model.linear.bias[c];
    }
    return s;
}

std::size_t nbsvm_predict(const NbsvmModel& model, const SparseVec& x) {
    return argmax_class(nbsvm_scores(model, x));
}

} // namespace msenti::baselines
