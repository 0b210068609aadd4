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

#ifndef MSENTI_NAIVE_BAYES_HPP
#define MSENTI_NAIVE_BAYES_HPP

#include <array>
#include <cstddef>

#include "msenti/corpus.hpp"
#include "msenti/tensor.hpp"
#include "msenti/text_features.hpp"

namespace msenti::baselines {

/// Multinomial naive Bayes with additive smoothing.
struct MnbModel {
    nn::Tensor log_priors;      ///< (3); -inf for a class absent from training
    nn::Tensor log_likelihoods; ///< (3, V)
    double alpha = 1.0;
    bool binarize = true;
};

/// log_prior_c = ln(N_c / N)
/// log_likelihood_{c,w} = ln((count_{c,w} + alpha) / (sum_w count_{c,w} + alpha V))
/// With binarize, each document's counts are clipped to {0, 1} first.
MnbModel mnb_fit(const Dataset& train, double alpha = 1.0, bool binarize = true);

struct MnbPrediction {
    std::size_t label = 0;
    /// Unnormalized: log prior plus the count-weighted log likelihoods.
    std::array<double, corpus::kNumClasses> log_posteriors{};
};

/// Highest log-posterior, lowest class index on ties. Binarizes x when the
/// model was fitted binarized.
MnbPrediction mnb_predict(const MnbModel& model, const SparseVec& x);

} // namespace msenti::baselines

#endif // MSENTI_NAIVE_BAYES_HPP
