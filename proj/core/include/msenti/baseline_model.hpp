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

#ifndef MSENTI_BASELINE_MODEL_HPP
#define MSENTI_BASELINE_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "msenti/corpus.hpp"
#include "msenti/linear.hpp"
#include "msenti/metrics.hpp"
#include "msenti/naive_bayes.hpp"
#include "msenti/text_features.hpp"

namespace msenti::baselines {

enum class Method { mnb, nbsvm, svm };

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

struct BaselineConfig {
    Method method = Method::mnb;
    FeatureKind features = FeatureKind::unigram;
    double alpha = 1.0;                ///< MNB / NBSVM smoothing
    double beta = kDefaultNbsvmBeta;   ///< NBSVM interpolation
    double lambda = kDefaultLambda;    ///< SVM / NBSVM regularization
    std::size_t epochs = kDefaultEpochs;
    std::uint64_t seed = 1;
    /// MNB only. Ignored (treated as false) for tf-idf features, where
    /// clipping to {0, 1} would discard the weighting.
    bool binarize = true;
};

/// A fitted featurizer plus classifier; the unit that is saved, loaded and
/// evaluated.
class BaselineModel {
public:
    using Classifier = std::variant<MnbModel, NbsvmModel, LinearModel>;

    BaselineModel(BaselineConfig config, Featurizer featurizer, Classifier classifier);

    static BaselineModel fit(const corpus::Corpus& train, const BaselineConfig& config);

    std::size_t predict_index(std::string_view text) const;
    corpus::Polarity predict(std::string_view text) const;
    Metrics evaluate(const corpus::Corpus& corpus) const;

    const BaselineConfig& config() const { return config_; }
    const Featurizer& featurizer() const { return featurizer_; }
    const Classifier& classifier() const { return classifier_; }

private:
    BaselineConfig config_;
    Featurizer featurizer_;
    Classifier classifier_;
};

} // namespace msenti::baselines

#endif // MSENTI_BASELINE_MODEL_HPP
