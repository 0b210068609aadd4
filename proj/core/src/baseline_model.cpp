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

#include "msenti/baseline_model.hpp"

#include "msenti/error.hpp"

namespace msenti::baselines {

std::string_view method_name(Method method) {
    switch (method) {
    case Method::mnb: return "mnb";
    case Method::nbsvm: return "nbsvm";
    case Method::svm: return "svm";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    if (name == "mnb") {
        return Method::mnb;
    }
    if (name == "nbsvm") {
        return Method::nbsvm;
    }
    if (name == "svm") {
        return Method::svm;
    }
    return std::nullopt;
}

BaselineModel::BaselineModel(BaselineConfig config, Featurizer featurizer, Classifier classifier)
    : config_(config), featurizer_(std::move(featurizer)), classifier_(std::move(classifier)) {
    const bool ok = (config_.method == Method::mnb && std::holds_alternative<MnbModel>(classifier_)) ||
                    (config_.method == Method::nbsvm && std::holds_alternative<NbsvmModel>(classifier_)) ||
                    (config_.method == Method::svm && std::holds_alternative<LinearModel>(classifier_));
    if (!ok) {
        throw InvariantError("baseline classifier does not match its method tag");
    }
    if (config_.features == FeatureKind::tfidf) {
        config_.binarize = false;
    }
}

BaselineModel BaselineModel::fit(const corpus::Corpus& train, const BaselineConfig& config) {
    Featurizer featurizer = Featurizer::fit(train, config.features);
    const Dataset data = featurize(train, featurizer);
    BaselineConfig cfg = config;
    if (cfg.features == FeatureKind::tfidf) {
        cfg.binarize = false;
    }
    switch (cfg.method) {
    case Method::mnb:
        return {cfg, std::move(featurizer), mnb_fit(data, cfg.alpha, cfg.binarize)};
    case Method::nbsvm:
        return {cfg, std::move(featurizer),
                nbsvm_fit(data, cfg.beta, cfg.lambda, cfg.alpha, cfg.epochs, cfg.seed)};
    case Method::svm:
        return {cfg, std::move(featurizer), svm_fit(data, cfg.lambda, cfg.epochs, cfg.seed)};
    }
    throw InvariantError("unknown baseline method");
}

std::size_t BaselineModel::predict_index(std::string_view text) const {
    const SparseVec x = featurizer_.transform(text);
    return std::visit(
        [&x](const auto& m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MnbModel>) {
                return mnb_predict(m, x).label;
            } else if constexpr (std::is_same_v<T, NbsvmModel>) {
                return nbsvm_predict(m, x);
            } else {
                return svm_predict(m, x);
            }
        },
        classifier_);
}

corpus::Polarity BaselineModel::predict(std::string_view text) const {
    return corpus::polarity_from_index(predict_index(text));
}

Metrics BaselineModel::evaluate(const corpus::Corpus& corpus) const {
    if (corpus.empty()) {
        throw InputError("cannot evaluate on an empty corpus");
    }
    std::vector<std::size_t> truth;
    std::vector<std::size_t> predicted;
    truth.reserve(corpus.size());
    predicted.reserve(corpus.size());
    for (const auto& c : corpus.comments) {
        truth.push_back(corpus::class_index(c.label()));
        predicted.push_back(predict_index(c.text()));
    }
    return compute_metrics(truth, predicted);
}

} // namespace msenti::baselines
