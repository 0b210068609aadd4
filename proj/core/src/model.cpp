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

#include "msenti/model.hpp"

#include <cmath>

#include "msenti/corpus.hpp"
#include "msenti/error.hpp"
#include "msenti/rng.hpp"

namespace msenti::nn {

namespace {

constexpr std::array<char, kNumGates> kGateSuffix = {'i', 'f', 'c', 'o'};

std::string gate_name(std::string_view prefix, std::size_t gate) {
    return std::string(prefix) + "_" + kGateSuffix[gate];
}

void glorot_fill(Tensor& t, std::size_t fan_in, std::size_t fan_out, Xoshiro256& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : t.data()) {
        v = rng.uniform(-limit, limit);
    }
}

template <typename Self, typename Ref>
std::vector<Ref> named_impl(Self& self) {
    std::vector<Ref> out;
    out.push_back({"embedding", &self.embedding});
    if (self.hp.kind == ArchitectureKind::subword) {
        out.push_back({"conv.weight", &self.conv_weight});
        out.push_back({"conv.bias", &self.conv_bias});
    }
    for (std::size_t g = 0; g < kNumGates; ++g) {
        out.push_back({gate_name("lstm.w", g), &self.lstm_w[g]});
    }
    for (std::size_t g = 0; g < kNumGates; ++g) {
        out.push_back({gate_name("lstm.u", g), &self.lstm_u[g]});
    }
    for (std::size_t g = 0; g < kNumGates; ++g) {
        out.push_back({gate_name("lstm.b", g), &self.lstm_b[g]});
    }
    if (self.hp.peephole) {
        out.push_back({"lstm.v_o", &self.lstm_peephole});
    }
    out.push_back({"dense.weight", &self.dense_weight});
    out.push_back({"dense.bias", &self.dense_bias});
    return out;
}

} // namespace

std::string_view architecture_name(ArchitectureKind kind) {
    return kind == ArchitectureKind::subword ? "subword" : "char";
}

std::optional<ArchitectureKind> parse_architecture(std::string_view name) {
    if (name == "subword") {
        return ArchitectureKind::subword;
    }
    if (name == "char") {
        return ArchitectureKind::character;
    }
    return std::nullopt;
}

std::size_t Hyperparams::lstm_input_size() const {
    return kind == ArchitectureKind::subword ? num_filters : embed_dim;
}

std::size_t Hyperparams::conv_width() const {
    return max_len >= kernel_width ? max_len - kernel_width + 1 : 0;
}

std::size_t Hyperparams::steps() const {
    return kind == ArchitectureKind::subword ? conv_width() / pool_size : max_len;
}

void Hyperparams::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) {
            throw InputError("invalid hyperparameters: " + what);
        }
    };
    require(vocab_size >= static_cast<std::size_t>(corpus::CharVocab::kFirstChar),
            "vocab_size must include pad and oov");
    require(embed_dim >= 1, "embed_dim must be >= 1");
    require(hidden >= 1, "hidden must be >= 1");
    require(max_len >= 1, "max_len must be >= 1");
    if (kind == ArchitectureKind::subword) {
        require(num_filters >= 1, "num_filters must be >= 1");
        require(kernel_width >= 1, "kernel_width must be >= 1");
        require(pool_size >= 1, "pool_size must be >= 1");
        require(max_len >= kernel_width, "max_len must be >= kernel_width");
        require(conv_width() >= pool_size, "convolution width must be >= pool_size");
    }
}

std::vector<std::pair<std::string, Shape>> ModelParams::expected_shapes(const Hyperparams& hp) {
    const std::size_t in = hp.lstm_input_size();
    const std::size_t h = hp.hidden;
    std::vector<std::pair<std::string, Shape>> out;
    out.emplace_back("embedding", Shape{hp.vocab_size, hp.embed_dim});
    if (hp.kind == ArchitectureKind::subword) {
        out.emplace_back("conv.weight", Shape{hp.num_filters, hp.embed_dim, hp.kernel_width});
        out.emplace_back("conv.bias", Shape{hp.num_filters});
    }
    for (std::size_t g = 0; g < kNumGates; ++g) {
        out.emplace_back(gate_name("lstm.w", g), Shape{h, in});
    }
    for (std::size_t g = 0; g < kNumGates; ++g) {
        out.emplace_back(gate_name("lstm.u", g), Shape{h, h});
    }
    for (std::size_t g = 0; g < kNumGates; ++g) {
        out.emplace_back(gate_name("lstm.b", g), Shape{h});
    }
    if (hp.peephole) {
        out.emplace_back("lstm.v_o", Shape{h});
    }
    out.emplace_back("dense.weight", Shape{h, kNumClasses});
    out.emplace_back("dense.bias", Shape{kNumClasses});
    return out;
}

ModelParams ModelParams::zeros(const Hyperparams& hp) {
    hp.validate();
    ModelParams m;
    m.hp = hp;
    const auto shapes = expected_shapes(hp);
    auto refs = m.named();
    for (std::size_t i = 0; i < refs.size(); ++i) {
        *refs[i].tensor = Tensor(shapes[i].second);
    }
    return m;
}

ModelParams ModelParams::initialize(const Hyperparams& hp, std::uint64_t seed) {
    ModelParams m = zeros(hp);
    Xoshiro256 rng(seed);
    const std::size_t in = hp.lstm_input_size();

    glorot_fill(m.embedding, hp.vocab_size, hp.embed_dim, rng);
    for (std::size_t j = 0; j < hp.embed_dim; ++j) {
        m.embedding(corpus::CharVocab::kPad, j) = 0.0;
    }
    if (hp.kind == ArchitectureKind::subword) {
        glorot_fill(m.conv_weight, hp.embed_dim * hp.kernel_width,
                    hp.num_filters * hp.kernel_width, rng);
    }
    for (std::size_t g = 0; g < kNumGates; ++g) {
        glorot_fill(m.lstm_w[g], in, hp.hidden, rng);
    }
    for (std::size_t g = 0; g < kNumGates; ++g) {
        glorot_fill(m.lstm_u[g], hp.hidden, hp.hidden, rng);
    }
    m.lstm_b[kForgetGate].fill(1.0);
    glorot_fill(m.dense_weight, hp.hidden, kNumClasses, rng);
    return m;
}

std::vector<NamedRef<Tensor>> ModelParams::named() {
    return named_impl<ModelParams, NamedRef<Tensor>>(*this);
}

std::vector<NamedRef<const Tensor>> ModelParams::named() const {
    return named_impl<const ModelParams, NamedRef<const Tensor>>(*this);
}

std::size_t ModelParams::parameter_count() const {
    std::size_t n = 0;
    for (const auto& ref : named()) {
        n += ref.tensor->size();
    }
    return n;
}

void ModelParams::validate() const {
    const auto shapes = expected_shapes(hp);
    const auto refs = named();
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (refs[i].tensor->shape() != shapes[i].second) {
            throw InvariantError("tensor '" + refs[i].name + "' has shape " +
                                 shape_string(refs[i].tensor->shape()) + ", expected " +
                                 shape_string(shapes[i].second));
        }
    }
    if (hp.kind == ArchitectureKind::character && (!conv_weight.empty() || !conv_bias.empty())) {
        throw InvariantError("character architecture must not carry convolution tensors");
    }
}

bool ModelParams::same_values(const ModelParams& other) const {
    if (!(hp == other.hp)) {
        return false;
    }
    const auto a = named();
    const auto b = other.named();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(*a[i].tensor == *b[i].tensor)) {
            return false;
        }
    }
    return true;
}

} // namespace msenti::nn
