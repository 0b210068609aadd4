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

#include "msenti/naive_bayes.hpp"

#include <cmath>
#include <limits>

#include "msenti/error.hpp"
#include "msenti/metrics.hpp"

namespace msenti::baselines {

MnbModel mnb_fit(const Dataset& train, double alpha, bool binarize) {
    if (train.size() == 0) {
        throw InputError("mnb_fit: empty training set");
    }
    if (!(alpha > 0.0)) {
        throw InputError("mnb_fit: alpha must be > 0");
    }
    constexpr std::size_t k = corpus::kNumClasses;
    const std::size_t dim = train.dimension;
    MnbModel model;
    model.alpha = alpha;
    model.binarize = binarize;
    model.log_priors = nn::Tensor({k});
    model.log_likelihoods = nn::Tensor({k, dim});

    std::array<std::size_t, k> docs_per_class{};
    nn::Tensor counts({k, dim});
    for (std::size_t i = 0; i < train.size(); ++i) {
        const std::size_t c = train.y[i];
        ++docs_per_class[c];
        const SparseVec x = binarize ? train.x[i].binarized() : train.x[i];
        for (const auto& e : x.entries()) {
            counts(c, e.index) += e.value;
        }
    }
    const auto n = static_cast<double>(train.size());
    for (std::size_t c = 0; c < k; ++c) {
        model.log_priors[c] = docs_per_class[c] == 0
                                  ? -std::numeric_limits<double>::infinity()
                                  : std::log(static_cast<double>(docs_per_class[c]) / n);
        double total = 0.0;
        for (double v : counts.row(c)) {
            total += v;
        }
        const double denom = total + alpha * static_cast<double>(dim);
        for (std::size_t w = 0; w < dim; ++w) {
            model.log_likelihoods(c, w) = std::log((counts(c, w) + alpha) / denom);
        }
    }
    return model;
}

MnbPrediction mnb_predict(const MnbModel& model, const SparseVec& x) {
    const SparseVec features = model.binarize ? x.binarized() : x;
    MnbPrediction p;
    for (std::size_t c = 0; c < corpus::kNumClasses; ++c) {
        p.log_posteriors[c] = model.log_priors[c] + features.dot(model.log_likelihoods.row(c));
    }
    p.label = argmax_class(p.log_posteriors);
    return p;
}

} // namespace msenti::baselines
