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

#ifndef MSENTI_LINEAR_HPP
#define MSENTI_LINEAR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "msenti/corpus.hpp"
#include "msenti/tensor.hpp"
#include "msenti/text_features.hpp"

namespace msenti::baselines {

struct BinaryLinear {
    std::vector<double> weights;
    double bias = 0.0;
};

/**
 * Linear SVM for labels in {-1, +1}, trained by Pegasos-style stochastic
 * subgradient descent on
 *
 *   lambda/2 (|w|^2 + b^2) + mean_i max(0, 1 - y_i (w.x_i + b))
 *
 * with step size 1/(lambda t). The bias is an extra constant feature and is
 * regularized with the weights. Each epoch visits every example once in an
 * order drawn from the seeded generator.
 */
BinaryLinear train_hinge_binary(std::span<const SparseVec> x, std::span<const int> y,
                                std::size_t dimension, double lambda, std::size_t epochs,
                                std::uint64_t seed);

/// One-vs-rest linear model; scores are weights[c] . x + bias[c].
struct LinearModel {
    nn::Tensor weights; ///< (3, V)
    nn::Tensor bias;    ///< (3)
    double lambda = 1e-4;
    std::size_t epochs = 50;
    std::uint64_t seed = 1;
};

inline constexpr double kDefaultLambda = 1e-4;
inline constexpr std::size_t kDefaultEpochs = 50;

LinearModel svm_fit(const Dataset& train, double lambda = kDefaultLambda,
                    std::size_t epochs = kDefaultEpochs, std::uint64_t seed = 1);
std::array<double, corpus::kNumClasses> linear_scores(const LinearModel& model, const SparseVec& x);
/// Highest score, lowest class index on ties.
std::size_t svm_predict(const LinearModel& model, const SparseVec& x);

/// r = ln((p / |p|_1) / (q / |q|_1)) with p = alpha + pos_counts and
/// q = alpha + neg_counts.
std::vector<double> log_count_ratio(std::span<const double> pos_counts,
                                    std::span<const double> neg_counts, double alpha);

/**
 * NB-SVM, one-vs-rest. For class c: binarize features, compute the
 * log-count ratio r_c of class c against the rest, train a linear SVM on
 * r_c * x, then interpolate w' = (1 - beta) mean|w| + beta w.
 */
struct NbsvmModel {
    LinearModel linear;  ///< interpolated weights w' and biases
    nn::Tensor ratios;   ///< (3, V) log-count ratios r_c
    double alpha = 1.0;
    double beta = 0.25;
};

inline constexpr double kDefaultNbsvmBeta = 0.25;
inline constexpr double kDefaultNbsvmAlpha = 1.0;

/// Throws InputError when a class has no training example.
NbsvmModel nbsvm_fit(const Dataset& train, double beta = kDefaultNbsvmBeta,
                     double lambda = kDefaultLambda, double alpha = kDefaultNbsvmAlpha,
                     std::size_t epochs = kDefaultEpochs, std::uint64_t seed = 1);
std::array<double, corpus::kNumClasses> nbsvm_scores(const NbsvmModel& model, const SparseVec& x);
std::size_t nbsvm_predict(const NbsvmModel& model, const SparseVec& x);

/// r_c * binarize(x) for class c.
SparseVec nb_scale(const SparseVec& x, std::span<const double> ratio);

} // namespace msenti::baselines

#endif // MSENTI_LINEAR_HPP
