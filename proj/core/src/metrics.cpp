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

#include "msenti/metrics.hpp"

#include <cstring>

#include <json.hpp>

#include "msenti/error.hpp"

namespace msenti {

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

} // namespace

bool operator==(const Metrics& a, const Metrics& b) {
    if (a.confusion != b.confusion || a.total != b.total || !same_bits(a.accuracy, b.accuracy) ||
        !same_bits(a.macro_f1, b.macro_f1) || !same_bits(a.weighted_f1, b.weighted_f1)) {
        return false;
    }
    for (std::size_t c = 0; c < corpus::kNumClasses; ++c) {
        const auto& x = a.per_class[c];
        const auto& y = b.per_class[c];
        if (!same_bits(x.precision, y.precision) || !same_bits(x.recall, y.recall) ||
            !same_bits(x.f1, y.f1) || x.support != y.support) {
            return false;
        }
    }
    return true;
}

Metrics metrics_from_confusion(const ConfusionMatrix& confusion) {
    constexpr std::size_t k = corpus::kNumClasses;
    Metrics m;
    m.confusion = confusion;
    std::size_t correct = 0;
    std::array<std::size_t, k> predicted{};
    for (std::size_t t = 0; t < k; ++t) {
        for (std::size_t p = 0; p < k; ++p) {
            m.total += confusion[t][p];
            predicted[p] += confusion[t][p];
            m.per_class[t].support += confusion[t][p];
        }
        correct += confusion[t][t];
    }
    if (m.total == 0) {
        throw InputError("metrics over an empty evaluation set are undefined");
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(m.total);
    for (std::size_t c = 0; c < k; ++c) {
        auto& s = m.per_class[c];
        const auto tp = static_cast<double>(confusion[c][c]);
        s.precision = safe_div(tp, static_cast<double>(predicted[c]));
        s.recall = safe_div(tp, static_cast<double>(s.support));
        s.f1 = safe_div(2.0 * s.precision * s.recall, s.precision + s.recall);
        m.macro_f1 += s.f1;
        m.weighted_f1 += s.f1 * static_cast<double>(s.support);
    }
    m.macro_f1 /= static_cast<double>(k);
    m.weighted_f1 /= static_cast<double>(m.total);
    return m;
}

Metrics compute_metrics(std::span<const std::size_t> truth, std::span<const std::size_t> predicted) {
    if (truth.size() != predicted.size()) {
        throw InputError("metrics: truth and prediction counts differ");
    }
    ConfusionMatrix cm{};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= corpus::kNumClasses || predicted[i] >= corpus::kNumClasses) {
            throw InputError("metrics: class index out of range");
        }
        ++cm[truth[i]][predicted[i]];
    }
    return metrics_from_confusion(cm);
}

std::string metrics_to_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["total"] = m.total;
    j["accuracy"] = m.accuracy;
    j["macro_f1"] = m.macro_f1;
    j["weighted_f1"] = m.weighted_f1;
    nlohmann::ordered_json per_class;
    for (std::size_t c = 0; c < corpus::kNumClasses; ++c) {
        const auto& s = m.per_class[c];
        per_class[std::string(corpus::polarity_name(corpus::polarity_from_index(c)))] = {
            {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
    }
    j["per_class"] = per_class;
    j["confusion_matrix"] = m.confusion;
    return j.dump(2);
}

std::size_t argmax_class(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) {
            best = c;
        }
    }
    return best;
}

} // namespace msenti
