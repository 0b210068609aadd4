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

#include <doctest.h>

#include <vector>

#include <json.hpp>

#include "msenti/error.hpp"
#include "msenti/metrics.hpp"
#include "msenti/rng.hpp"

using namespace msenti;

TEST_CASE("hand confusion matrix") {
    const ConfusionMatrix cm = {{{2, 0, 0}, {1, 1, 0}, {0, 0, 2}}};
    const auto m = metrics_from_confusion(cm);
    CHECK(m.total == 6);
    CHECK(m.accuracy == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(m.per_class[0].precision == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m.per_class[0].recall == 1.0);
    CHECK(m.per_class[0].f1 == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(m.per_class[1].precision == 1.0);
    CHECK(m.per_class[1].recall == 0.5);
    CHECK(m.per_class[2].f1 == 1.0);
    const double macro = (0.8 + 2.0 / 3.0 + 1.0) / 3.0;
    CHECK(m.macro_f1 == doctest::Approx(macro).epsilon(1e-15));
}

TEST_CASE("perfect predictions") {
    const std::vector<std::size_t> y = {0, 1, 2, 2, 1};
    const auto m = compute_metrics(y, y);
    CHECK(m.accuracy == 1.0);
    CHECK(m.macro_f1 == 1.0);
    CHECK(m.weighted_f1 == 1.0);
}

TEST_CASE("zero denominators give zero scores") {
    const std::vector<std::size_t> truth = {0, 0};
    const std::vector<std::size_t> pred = {1, 1};
    const auto m = compute_metrics(truth, pred);
    CHECK(m.accuracy == 0.0);
    CHECK(m.per_class[0].precision == 0.0);
    CHECK(m.per_class[1].recall == 0.0);
    CHECK(m.per_class[2].f1 == 0.0);
    CHECK(m.macro_f1 == 0.0);
}

TEST_CASE("empty or mismatched inputs are errors") {
    CHECK_THROWS_AS(compute_metrics(std::vector<std::size_t>{}, std::vector<std::size_t>{}), InputError);
    CHECK_THROWS_AS(compute_metrics(std::vector<std::size_t>{1}, std::vector<std::size_t>{}), InputError);
    CHECK_THROWS_AS(compute_metrics(std::vector<std::size_t>{3}, std::vector<std::size_t>{0}), InputError);
}

TEST_CASE("accuracy is trace over total and F1 scores lie in [0,1]") {
    Xoshiro256 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = 1 + rng.below(40);
        std::vector<std::size_t> t(n), p(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            t[i] = rng.below(3);
            p[i] = rng.below(3);
        }
        const auto m = compute_metrics(t, p);
        std::size_t trace = 0;
        std::size_t sum = 0;
        for (std::size_t a = 0; a < 3; ++a) {
            trace += m.confusion[a][a];
            for (std::size_t b = 0; b < 3; ++b) sum += m.confusion[a][b];
        }
        CHECK(sum == n);
        CHECK(m.accuracy == static_cast<double>(trace) / static_cast<double>(n));
        CHECK(m.macro_f1 >= 0.0);
        CHECK(m.macro_f1 <= 1.0);
        CHECK(m.weighted_f1 >= 0.0);
        CHECK(m.weighted_f1 <= 1.0);
    }
}

TEST_CASE("metrics JSON carries every field") {
    const ConfusionMatrix cm = {{{2, 0, 0}, {1, 1, 0}, {0, 0, 2}}};
    const auto j = nlohmann::json::parse(metrics_to_json(metrics_from_confusion(cm)));
    CHECK(j["total"] == 6);
    CHECK(j.contains("accuracy"));
    CHECK(j.contains("macro_f1"));
    CHECK(j.contains("weighted_f1"));
    CHECK(j["per_class"]["negative"]["support"] == 2);
    CHECK(j["per_class"]["positive"]["f1"] == 1.0);
    CHECK(j["confusion_matrix"][1][0] == 1);
    CHECK(j["accuracy"].get<double>() == 5.0 / 6.0);
}

TEST_CASE("argmax_class breaks ties toward the lowest index") {
    CHECK(argmax_class(std::vector<double>{1.0, 1.0, 1.0}) == 0);
    CHECK(argmax_class(std::vector<double>{0.0, 2.0, 2.0}) == 1);
    CHECK(argmax_class(std::vector<double>{0.0, 1.0, 2.0}) == 2);
}
