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

#include <cmath>
#include <limits>
#include <vector>

#include "msenti/adamax.hpp"
#include "msenti/error.hpp"
#include "msenti/rng.hpp"

using namespace msenti;
using namespace msenti::nn;
using namespace msenti::train;

namespace {

struct Scalar {
    Tensor theta{Shape{1}};
    Tensor grad{Shape{1}};
    AdamaxState state{std::vector<Shape>{{1}}, AdamaxConfig{}};

    void step(double g) {
        grad[0] = g;
        const std::vector<NamedRef<Tensor>> p = {{"theta", &theta}};
        const std::vector<NamedRef<const Tensor>> gr = {{"theta", &grad}};
        adamax_step(p, gr, state);
    }
};

} // namespace

TEST_CASE("first step closed form") {
    Scalar s;
    s.step(1.0);
    CHECK(s.state.step == 1);
    CHECK(s.state.first_moment[0][0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(s.state.infinity_norm[0][0] == 1.0);
    CHECK(s.theta[0] == doctest::Approx(-0.002).epsilon(1e-12));
}

TEST_CASE("zero gradients never move parameters") {
    Scalar s;
    s.theta[0] = 0.75;
    for (int i = 0; i < 20; ++i) {
        s.step(0.0);
    }
    CHECK(s.theta[0] == 0.75);
    CHECK(s.state.step == 20);
}

TEST_CASE("update is odd in the gradient") {
    Xoshiro256 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        Scalar a;
        Scalar b;
        for (int i = 0; i < 15; ++i) {
            const double g = rng.uniform(-3.0, 3.0);
            a.step(g);
            b.step(-g);
            CHECK(a.theta[0] == -b.theta[0]);
        }
    }
}

TEST_CASE("infinity norm is non-negative and non-decreasing per element") {
    Xoshiro256 rng(2);
    Scalar s;
    double prev_u = 0.0;
    for (int i = 0; i < 200; ++i) {
        // Decay only ever shrinks u by beta2, so a sequence of shrinking
        // gradients is the adversarial case.
        s.step(rng.uniform(-1.0, 1.0) * std::pow(0.97, i));
        const double u = s.state.infinity_norm[0][0];
        CHECK(u >= 0.0);
        CHECK(u >= prev_u * s.state.config.beta2);
        prev_u = u;
    }
}

TEST_CASE("with beta2 = 1 the infinity norm never decreases") {
    Xoshiro256 rng(3);
    Scalar s;
    s.state.config.beta2 = 1.0;
    double prev_u = 0.0;
    for (int i = 0; i < 200; ++i) {
        s.step(rng.uniform(-1.0, 1.0) * std::pow(0.97, i));
        CHECK(s.state.infinity_norm[0][0] >= prev_u);
        prev_u = s.state.infinity_norm[0][0];
    }
}

TEST_CASE("elements with zero accumulator stay put while others move") {
    Tensor theta({2}, {1.0, 1.0});
    Tensor grad({2}, {0.0, 0.5});
    AdamaxState state(std::vector<Shape>{{2}}, AdamaxConfig{});
    const std::vector<NamedRef<Tensor>> p = {{"w", &theta}};
    const std::vector<NamedRef<const Tensor>> g = {{"w", &grad}};
    adamax_step(p, g, state);
    CHECK(theta[0] == 1.0);
    CHECK(theta[1] < 1.0);
}

TEST_CASE("non-finite gradients are rejected with the tensor name") {
    Tensor theta({1});
    Tensor grad({1}, {std::numeric_limits<double>::quiet_NaN()});
    AdamaxState state(std::vector<Shape>{{1}}, AdamaxConfig{});
    const std::vector<NamedRef<Tensor>> p = {{"lstm.w_i", &theta}};
    const std::vector<NamedRef<const Tensor>> g = {{"lstm.w_i", &grad}};
    try {
        adamax_step(p, g, state);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("lstm.w_i") != std::string::npos);
    }
    CHECK(state.step == 0);
    CHECK(theta[0] == 0.0);
}

TEST_CASE("model-level step bumps the revision") {
    Hyperparams hp;
    hp.kind = ArchitectureKind::character;
    hp.vocab_size = 4;
    hp.embed_dim = 2;
    hp.hidden = 2;
    hp.max_len = 3;
    auto model = ModelParams::initialize(hp, 1);
    auto grads = ModelParams::zeros(hp);
    grads.dense_bias[0] = 1.0;
    AdamaxState state(model, AdamaxConfig{});
    const auto before = model.revision;
    const double b0 = model.dense_bias[0];
    adamax_step(model, grads, state);
    CHECK(model.revision == before + 1);
    CHECK(model.dense_bias[0] == doctest::Approx(b0 - 0.002));
    CHECK(model.dense_bias[1] == 0.0);
}
