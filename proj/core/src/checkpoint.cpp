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

#include "msenti/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "msenti/error.hpp"
#include "msenti/utf8.hpp"

namespace msenti::checkpoint {

namespace {

using Json = nlohmann::ordered_json;
using nn::Shape;
using nn::Tensor;

constexpr std::string_view kTruncated = "unexpected end of checkpoint";

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

std::uint64_t get_u64(std::string_view bytes, std::size_t pos) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
    }
    return v;
}

struct TensorEntry {
    std::string name;
    const Tensor* tensor;
};

std::string write_container(Json header, const std::vector<TensorEntry>& tensors) {
    Json manifest = Json::array();
    std::uint64_t offset = 0;
    for (const auto& t : tensors) {
        manifest.push_back({{"name", t.name}, {"shape", t.tensor->shape()}, {"offset", offset}});
        offset += t.tensor->size() * sizeof(double);
    }
    header["tensors"] = std::move(manifest);
    const std::string text = header.dump();

    std::string out(kMagic);
    put_u64(out, text.size());
    out += text;
    out.reserve(out.size() + offset);
    for (const auto& t : tensors) {
        for (double v : t.tensor->data()) {
            put_u64(out, std::bit_cast<std::uint64_t>(v));
        }
    }
    return out;
}

struct Container {
    Json header;
    std::vector<std::pair<std::string, Tensor>> tensors;

    Tensor take(const std::string& name, const Shape& expected) {
        for (auto& [n, t] : tensors) {
            if (n == name) {
                if (t.shape() != expected) {
                    throw FormatError("shape mismatch for tensor '" + name + "': file has " +
                                      nn::shape_string(t.shape()) + ", settings declare " +
                                      nn::shape_string(expected));
                }
                return std::move(t);
            }
        }
        throw FormatError("checkpoint is missing tensor '" + name + "'");
    }
};

Container read_container(std::string_view bytes) {
    if (bytes.size() < kMagic.size()) {
        throw FormatError(std::string(kTruncated));
    }
    if (bytes.substr(0, kMagic.size()) != kMagic) {
        throw FormatError("not a checkpoint: bad magic");
    }
    std::size_t pos = kMagic.size();
    if (bytes.size() < pos + 8) {
        throw FormatError(std::string(kTruncated));
    }
    const std::uint64_t header_len = get_u64(bytes, pos);
    pos += 8;
    if (header_len > bytes.size() - pos) {
        throw FormatError(std::string(kTruncated));
    }
    Container c;
    try {
        c.header = Json::parse(bytes.substr(pos, header_len));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("corrupt checkpoint header: ") + e.what());
    }
    pos += header_len;

    try {
        const int version = c.header.at("format_version").get<int>();
        if (version != kFormatVersion) {
            throw FormatError("unsupported checkpoint version " + std::to_string(version) +
                              " (supported versions: " + std::to_string(kFormatVersion) + ")");
        }
        const std::size_t data_start = pos;
        for (const auto& entry : c.header.at("tensors")) {
            const auto name = entry.at("name").get<std::string>();
            const auto shape = entry.at("shape").get<Shape>();
            const auto offset = entry.at("offset").get<std::uint64_t>();
            if (offset != pos - data_start) {
                throw FormatError("tensor '" + name + "' has an inconsistent data offset");
            }
            const std::size_t n = nn::shape_size(shape);
            if (n > (bytes.size() - pos) / sizeof(double)) {
                throw FormatError(std::string(kTruncated));
            }
            std::vector<double> data(n);
            for (std::size_t i = 0; i < n; ++i) {
                data[i] = std::bit_cast<double>(get_u64(bytes, pos));
                pos += sizeof(double);
            }
            c.tensors.emplace_back(name, Tensor(shape, std::move(data)));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed checkpoint header: ") + e.what());
    }
    if (pos != bytes.size()) {
        throw FormatError("trailing bytes after checkpoint data");
    }
    return c;
}

Json hyperparams_json(const nn::Hyperparams& hp) {
    return {{"vocab_size", hp.vocab_size}, {"embed_dim", hp.embed_dim},
            {"num_filters", hp.num_filters}, {"kernel_width", hp.kernel_width},
            {"pool_size", hp.pool_size},     {"hidden", hp.hidden},
            {"max_len", hp.max_len},         {"peephole", hp.peephole}};
}

nn::Hyperparams hyperparams_from_json(const Json& j, nn::ArchitectureKind kind) {
    nn::Hyperparams hp;
    hp.kind = kind;
    hp.vocab_size = j.at("vocab_size").get<std::size_t>();
    hp.embed_dim = j.at("embed_dim").get<std::size_t>();
    hp.num_filters = j.at("num_filters").get<std::size_t>();
    hp.kernel_width = j.at("kernel_width").get<std::size_t>();
    hp.pool_size = j.at("pool_size").get<std::size_t>();
    hp.hidden = j.at("hidden").get<std::size_t>();
    hp.max_len = j.at("max_len").get<std::size_t>();
    hp.peephole = j.at("peephole").get<bool>();
    return hp;
}

NeuralCheckpoint neural_from_container(Container& c, ModelKind kind) {
    const auto arch = kind == ModelKind::subword_lstm ? nn::ArchitectureKind::subword
                                                      : nn::ArchitectureKind::character;
    const auto declared = nn::parse_architecture(c.header.at("architecture_kind").get<std::string>());
    if (!declared || *declared != arch) {
        throw FormatError("architecture_kind disagrees with model_kind");
    }
    const nn::Hyperparams hp = hyperparams_from_json(c.header.at("hyperparameters"), arch);
    try {
        hp.validate();
    } catch (const InputError& e) {
        throw FormatError(std::string("checkpoint settings are invalid: ") + e.what());
    }

    std::vector<char32_t> chars;
    for (const auto& s : c.header.at("vocab")) {
        const auto cps = utf8::decode(s.get<std::string>());
        if (cps.size() != 1) {
            throw FormatError("vocabulary entry is not a single character");
        }
        chars.push_back(cps.front());
    }
    NeuralCheckpoint out;
    try {
        out.vocab = corpus::CharVocab::from_chars(std::move(chars));
    } catch (const InputError& e) {
        throw FormatError(std::string("invalid vocabulary: ") + e.what());
    }
    if (out.vocab.size() != hp.vocab_size) {
        throw FormatError("vocabulary has " + std::to_string(out.vocab.size()) +
                          " entries but vocab_size is " + std::to_string(hp.vocab_size));
    }

    out.model = nn::ModelParams::zeros(hp);
    const auto expected = nn::ModelParams::expected_shapes(hp);
    if (c.tensors.size() != expected.size()) {
        throw FormatError("checkpoint has " + std::to_string(c.tensors.size()) +
                          " tensors, settings declare " + std::to_string(expected.size()));
    }
    auto refs = out.model.named();
    for (std::size_t i = 0; i < refs.size(); ++i) {
        *refs[i].tensor = c.take(expected[i].first, expected[i].second);
    }
    return out;
}

baselines::BaselineModel baseline_from_container(Container& c, ModelKind kind) {
    using namespace baselines;
    const Json& b = c.header.at("baseline");
    BaselineConfig cfg;
    const auto method = parse_method(b.at("method").get<std::string>());
    const auto features = parse_feature_kind(b.at("features").get<std::string>());
    if (!method || !features) {
        throw FormatError("unknown baseline method or feature kind");
    }
    if (model_kind_name(kind) != method_name(*method)) {
        throw FormatError("baseline method disagrees with model_kind");
    }
    cfg.method = *method;
    cfg.features = *features;
    cfg.alpha = b.at("alpha").get<double>();
    cfg.beta = b.at("beta").get<double>();
    cfg.lambda = b.at("lambda").get<double>();
    cfg.epochs = b.at("epochs").get<std::size_t>();
    cfg.seed = b.at("seed").get<std::uint64_t>();
    cfg.binarize = b.at("binarize").get<bool>();

    const auto range = c.header.at("ngram_range").get<int>() == 2 ? NGramRange::unigram_bigram
                                                                  : NGramRange::unigram;
    NGramVocab vocab;
    try {
        vocab = NGramVocab::from_ngrams(c.header.at("vocab").get<std::vector<std::string>>(), range);
    } catch (const InputError& e) {
        throw FormatError(std::string("invalid n-gram vocabulary: ") + e.what());
    }
    const std::size_t dim = vocab.size();
    constexpr std::size_t k = corpus::kNumClasses;

    std::optional<TfIdf> tfidf;
    std::size_t expected_tensors = 0;
    if (cfg.features == FeatureKind::tfidf) {
        Tensor df = c.take("tfidf.doc_freq", {dim});
        tfidf = TfIdf::from_stats({df.data().begin(), df.data().end()},
                                  c.header.at("tfidf_num_docs").get<std::size_t>());
        ++expected_tensors;
    }
    Featurizer featurizer = Featurizer::restore(cfg.features, std::move(vocab), std::move(tfidf));

    auto read_linear = [&](LinearModel& m) {
        m.weights = c.take("linear.weights", {k, dim});
        m.bias = c.take("linear.bias", {k});
        m.lambda = cfg.lambda;
        m.epochs = cfg.epochs;
        m.seed = cfg.seed;
        expected_tensors += 2;
    };

    BaselineModel::Classifier classifier;
    switch (cfg.method) {
    case Method::mnb: {
        MnbModel m;
        m.log_priors = c.take("mnb.log_priors", {k});
        m.log_likelihoods = c.take("mnb.log_likelihoods", {k, dim});
        m.alpha = cfg.alpha;
        m.binarize = cfg.binarize;
        expected_tensors += 2;
        classifier = std::move(m);
        break;
    }
    case Method::nbsvm: {
        NbsvmModel m;
        read_linear(m.linear);
        m.ratios = c.take("nbsvm.ratios", {k, dim});
        m.alpha = cfg.alpha;
        m.beta = cfg.beta;
        ++expected_tensors;
        classifier = std::move(m);
        break;
    }
    case Method::svm: {
        LinearModel m;
        read_linear(m);
        classifier = std::move(m);
        break;
    }
    }
    if (c.tensors.size() != expected_tensors) {
        throw FormatError("baseline checkpoint carries unexpected tensors");
    }
    return {cfg, std::move(featurizer), std::move(classifier)};
}

ModelKind kind_from_header(const Json& header) {
    try {
        const auto kind = parse_model_kind(header.at("model_kind").get<std::string>());
        if (!kind) {
            throw FormatError("unknown model_kind '" + header.at("model_kind").get<std::string>() +
                              "'");
        }
        return *kind;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed checkpoint header: ") + e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write checkpoint '" + path.string() + "'");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for checkpoint '" + path.string() + "'");
    }
}

} // namespace

std::string_view model_kind_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::subword_lstm: return "subword_lstm";
    case ModelKind::char_lstm: return "char_lstm";
    case ModelKind::mnb: return "mnb";
    case ModelKind::nbsvm: return "nbsvm";
    case ModelKind::svm: return "svm";
    }
    return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
    for (auto k : {ModelKind::subword_lstm, ModelKind::char_lstm, ModelKind::mnb,
                   ModelKind::nbsvm, ModelKind::svm}) {
        if (model_kind_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

bool is_neural(ModelKind kind) {
    return kind == ModelKind::subword_lstm || kind == ModelKind::char_lstm;
}

std::string serialize(const nn::ModelParams& model, const corpus::CharVocab& vocab) {
    model.validate();
    if (vocab.size() != model.hp.vocab_size) {
        throw InvariantError("vocabulary size does not match the model's embedding table");
    }
    const bool subword = model.hp.kind == nn::ArchitectureKind::subword;
    Json header;
    header["format_version"] = kFormatVersion;
    header["model_kind"] = model_kind_name(subword ? ModelKind::subword_lstm : ModelKind::char_lstm);
    header["architecture_kind"] = nn::architecture_name(model.hp.kind);
    header["hyperparameters"] = hyperparams_json(model.hp);
    Json chars = Json::array();
    for (char32_t ch : vocab.chars()) {
        chars.push_back(utf8::encode(ch));
    }
    header["vocab"] = std::move(chars);

    std::vector<TensorEntry> tensors;
    for (const auto& ref : model.named()) {
        tensors.push_back({ref.name, ref.tensor});
    }
    return write_container(std::move(header), tensors);
}

std::string serialize(const baselines::BaselineModel& model) {
    using namespace baselines;
    const BaselineConfig& cfg = model.config();
    Json header;
    header["format_version"] = kFormatVersion;
    header["model_kind"] = method_name(cfg.method);
    header["architecture_kind"] = "none";
    header["baseline"] = {{"method", method_name(cfg.method)},
                          {"features", feature_kind_name(cfg.features)},
                          {"alpha", cfg.alpha},
                          {"beta", cfg.beta},
                          {"lambda", cfg.lambda},
                          {"epochs", cfg.epochs},
                          {"seed", cfg.seed},
                          {"binarize", cfg.binarize}};
    const auto& fz = model.featurizer();
    header["ngram_range"] = fz.vocab().range() == NGramRange::unigram_bigram ? 2 : 1;
    header["vocab"] = fz.vocab().ngrams();

    std::vector<TensorEntry> tensors;
    Tensor doc_freq;
    if (fz.tfidf()) {
        header["tfidf_num_docs"] = fz.tfidf()->num_docs();
        doc_freq = Tensor({fz.tfidf()->doc_freq().size()}, fz.tfidf()->doc_freq());
        tensors.push_back({"tfidf.doc_freq", &doc_freq});
    }
    std::visit(
        [&tensors](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MnbModel>) {
                tensors.push_back({"mnb.log_priors", &m.log_priors});
                tensors.push_back({"mnb.log_likelihoods", &m.log_likelihoods});
            } else if constexpr (std::is_same_v<T, NbsvmModel>) {
                tensors.push_back({"linear.weights", &m.linear.weights});
                tensors.push_back({"linear.bias", &m.linear.bias});
                tensors.push_back({"nbsvm.ratios", &m.ratios});
            } else {
                tensors.push_back({"linear.weights", &m.weights});
                tensors.push_back({"linear.bias", &m.bias});
            }
        },
        model.classifier());
    return write_container(std::move(header), tensors);
}

AnyModel deserialize(std::string_view bytes) {
    Container c = read_container(bytes);
    const ModelKind kind = kind_from_header(c.header);
    try {
        if (is_neural(kind)) {
            return neural_from_container(c, kind);
        }
        return baseline_from_container(c, kind);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed checkpoint header: ") + e.what());
    }
}

ModelKind peek_model_kind(std::string_view bytes) {
    return kind_from_header(read_container(bytes).header);
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void save_checkpoint(const nn::ModelParams& model, const corpus::CharVocab& vocab,
                     const std::filesystem::path& path) {
    write_file(path, serialize(model, vocab));
}

void save_checkpoint(const baselines::BaselineModel& model, const std::filesystem::path& path) {
    write_file(path, serialize(model));
}

AnyModel load_checkpoint(const std::filesystem::path& path) {
    return deserialize(read_file_bytes(path));
}

NeuralCheckpoint load_neural_checkpoint(const std::filesystem::path& path) {
    auto any = load_checkpoint(path);
    if (auto* n = std::get_if<NeuralCheckpoint>(&any)) {
        return std::move(*n);
    }
    throw FormatError("'" + path.string() + "' holds a baseline model, not a neural one");
}

baselines::BaselineModel load_baseline_checkpoint(const std::filesystem::path& path) {
    auto any = load_checkpoint(path);
    if (auto* b = std::get_if<baselines::BaselineModel>(&any)) {
        return std::move(*b);
    }
    throw FormatError("'" + path.string() + "' holds a neural model, not a baseline");
}

} // namespace msenti::checkpoint
