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

#ifndef MSENTI_METRICS_HPP
#define MSENTI_METRICS_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "msenti/corpus.hpp"

namespace msenti {

using ConfusionMatrix =
    std::array<std::array<std::size_t, corpus::kNumClasses>, corpus::kNumClasses>;

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

/// Classification metrics over the three polarity classes. Precision,
/// recall and F1 with a zero denominator are 0.
struct Metrics {
    ConfusionMatrix confusion{}; ///< confusion[true][predicted]
    std::size_t total = 0;
    double accuracy = 0.0;
    std::array<ClassScores, corpus::kNumClasses> per_class{};
    double macro_f1 = 0.0;
    double weighted_f1 = 0.0;

    friend bool operator==(const Metrics&, const Metrics&);
};

Metrics metrics_from_confusion(const ConfusionMatrix& confusion);
Metrics compute_metrics(std::span<const std::size_t> truth, std::span<const std::size_t> predicted);

/// Stable, pretty-printed JSON. Doubles use the shortest round-trip form.
std::string metrics_to_json(const Metrics& metrics);

/// Index of the largest value, first index on ties.
std::size_t argmax_class(std::span<const double> scores);

} // namespace msenti

#endif // MSENTI_METRICS_HPP
