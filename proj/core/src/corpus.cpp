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

#include "msenti/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "msenti/error.hpp"
#include "msenti/rng.hpp"
#include "msenti/utf8.hpp"

namespace msenti::corpus {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

Corpus select(const Corpus& corpus, std::vector<std::size_t> members, std::string_view part) {
    std::sort(members.begin(), members.end());
    Corpus out;
    out.provenance = corpus.provenance + "#" + std::string(part);
    out.comments.reserve(members.size());
    for (std::size_t i : members) {
        out.comments.push_back(corpus.comments[i]);
    }
    return out;
}

} // namespace

Polarity polarity_from_index(std::size_t index) {
    if (index >= kNumClasses) {
        throw InputError("class index " + std::to_string(index) + " out of range");
    }
    return static_cast<Polarity>(index);
}

std::string_view polarity_name(Polarity p) {
    switch (p) {
    case Polarity::negative: return "negative";
    case Polarity::neutral: return "neutral";
    case Polarity::positive: return "positive";
    }
    return "unknown";
}

std::optional<Polarity> parse_polarity(std::string_view token) {
    const std::string lower = utf8::to_lower_ascii(trim(token));
    if (lower == "negative" || lower == "0") {
        return Polarity::negative;
    }
    if (lower == "neutral" || lower == "1") {
        return Polarity::neutral;
    }
    if (lower == "positive" || lower == "2") {
        return Polarity::positive;
    }
    return std::nullopt;
}

LabeledComment::LabeledComment(std::string text, Polarity label)
    : text_(std::move(text)), label_(label) {
    if (trim(text_).empty()) {
        throw InputError("comment text is empty");
    }
    if (class_index(label_) >= kNumClasses) {
        throw InputError("invalid polarity value");
    }
}

std::vector<Polarity> Corpus::labels() const {
    std::vector<Polarity> out;
    out.reserve(comments.size());
    for (const auto& c : comments) {
        out.push_back(c.label());
    }
    return out;
}

Corpus parse_corpus(std::istream& in, std::string provenance) {
    Corpus corpus;
    corpus.provenance = std::move(provenance);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos) {
            throw InputError("malformed line " + std::to_string(line_no) +
                             ": expected text<TAB>label");
        }
        const std::string_view label_token = trim(std::string_view(line).substr(tab + 1));
        const auto label = parse_polarity(label_token);
        if (!label) {
            throw InputError("unknown label '" + std::string(label_token) + "' at line " +
                             std::to_string(line_no));
        }
        std::string text = line.substr(0, tab);
        if (trim(text).empty()) {
            throw InputError("malformed line " + std::to_string(line_no) + ": empty text");
        }
        corpus.comments.emplace_back(std::move(text), *label);
    }
    return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open corpus file '" + path.string() + "'");
    }
    return parse_corpus(in, path.string());
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write corpus file '" + path.string() + "'");
    }
    for (const auto& c : corpus.comments) {
        out << c.text() << '\t' << polarity_name(c.label()) << '\n';
    }
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

bool is_roman_script(std::string_view text) {
    return std::all_of(text.begin(), text.end(), [](char ch) {
        const auto c = static_cast<unsigned char>(ch);
        return (c >= 0x20 && c <= 0x7E) || is_space(ch);
    });
}

std::size_t word_count(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++count;
        }
    }
    return count;
}

FilterResult filter_comments(const Corpus& corpus, std::size_t max_words) {
    FilterResult result;
    result.corpus.provenance = corpus.provenance;
    result.report.input = corpus.size();
    for (const auto& c : corpus.comments) {
        if (!is_roman_script(c.text())) {
            ++result.report.non_roman;
        } else if (word_count(c.text()) > max_words) {
            ++result.report.too_long;
        } else {
            result.corpus.comments.push_back(c);
        }
    }
    result.report.kept = result.corpus.size();
    return result;
}

SplitSizes split_sizes(std::size_t n) {
    SplitSizes s;
    s.test = n / 5;
    const std::size_t rest = n - s.test;
    s.validation = rest / 5;
    s.train = rest - s.validation;
    return s;
}

SplitSet split_corpus(const Corpus& corpus, std::uint64_t seed) {
    if (corpus.size() < 5) {
        throw InputError("corpus too small to split: " + std::to_string(corpus.size()) +
                         " comments, need at least 5");
    }
    const SplitSizes sizes = split_sizes(corpus.size());

    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Xoshiro256 rng(seed);
    rng.shuffle(std::span(order));

    const auto test_end = order.begin() + static_cast<std::ptrdiff_t>(sizes.test);
    const auto val_end = test_end + static_cast<std::ptrdiff_t>(sizes.validation);

    SplitSet split;
    split.seed = seed;
    split.test = select(corpus, {order.begin(), test_end}, "test");
    split.validation = select(corpus, {test_end, val_end}, "validation");
    split.train = select(corpus, {val_end, order.end()}, "train");
    return split;
}

void write_split(const SplitSet& split, const FilterReport& report,
                 const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
    }
    write_corpus(split.train, dir / "train.tsv");
    write_corpus(split.validation, dir / "validation.tsv");
    write_corpus(split.test, dir / "test.tsv");

    auto distribution = [](const Corpus& c) {
        const auto d = class_distribution(c);
        return nlohmann::ordered_json{{"negative", d[0]}, {"neutral", d[1]}, {"positive", d[2]}};
    };
    nlohmann::ordered_json manifest;
    manifest["seed"] = split.seed;
    manifest["sizes"] = {{"train", split.train.size()},
                         {"validation", split.validation.size()},
                         {"test", split.test.size()}};
    manifest["filter"] = {{"input", report.input},
                          {"kept", report.kept},
                          {"rejected_non_roman", report.non_roman},
                          {"rejected_too_long", report.too_long}};
    manifest["class_distribution"] = {{"train", distribution(split.train)},
                                      {"validation", distribution(split.validation)},
                                      {"test", distribution(split.test)}};

    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) {
        throw IoError("cannot write manifest in '" + dir.string() + "'");
    }
    out << manifest.dump(2) << '\n';
}

SplitSet read_split(const std::filesystem::path& dir) {
    SplitSet split;
    split.train = load_corpus(dir / "train.tsv");
    split.validation = load_corpus(dir / "validation.tsv");
    split.test = load_corpus(dir / "test.tsv");
    std::ifstream in(dir / "manifest.json");
    if (in) {
        try {
            const auto manifest = nlohmann::json::parse(in);
            split.seed = manifest.value("seed", std::uint64_t{0});
        } catch (const nlohmann::json::exception& e) {
            throw InputError("invalid manifest.json in '" + dir.string() + "': " + e.what());
        }
    }
    return split;
}

void CharVocab::add(char32_t c) {
    if (!index_.contains(c)) {
        index_.emplace(c, static_cast<std::int32_t>(chars_.size()) + kFirstChar);
        chars_.push_back(c);
    }
}

CharVocab CharVocab::build(const Corpus& train) {
    if (train.empty()) {
        throw InputError("cannot build a character vocabulary from an empty corpus");
    }
    CharVocab vocab;
    for (const auto& comment : train.comments) {
        for (char32_t c : utf8::decode(comment.text())) {
            vocab.add(utf8::to_lower(c));
        }
    }
    return vocab;
}

CharVocab CharVocab::from_chars(std::vector<char32_t> chars) {
    CharVocab vocab;
    for (char32_t c : chars) {
        if (utf8::to_lower(c) != c) {
            throw InputError("vocabulary character is not lowercase");
        }
        if (vocab.contains(c)) {
            throw InputError("duplicate vocabulary character");
        }
        vocab.add(c);
    }
    return vocab;
}

std::int32_t CharVocab::index_of(char32_t c) const {
    const auto it = index_.find(c);
    return it == index_.end() ? kOov : it->second;
}

char32_t CharVocab::char_at(std::int32_t index) const {
    if (index < kFirstChar || static_cast<std::size_t>(index) >= size()) {
        throw InputError("index " + std::to_string(index) + " is not a character index");
    }
    return chars_[static_cast<std::size_t>(index - kFirstChar)];
}

EncodedSentence encode_sentence(std::string_view text, const CharVocab& vocab,
                                std::size_t max_len) {
    if (max_len < 1) {
        throw InputError("max_len must be at least 1");
    }
    const auto cps = utf8::decode(text);
    if (cps.empty()) {
        throw InputError("cannot encode empty text");
    }
    EncodedSentence out;
    out.true_length = std::min(cps.size(), max_len);
    out.indices.assign(max_len, CharVocab::kPad);
    for (std::size_t i = 0; i < out.true_length; ++i) {
        out.indices[i] = vocab.index_of(utf8::to_lower(cps[i]));
    }
    return out;
}

std::string decode_sentence(const EncodedSentence& sentence, const CharVocab& vocab) {
    std::vector<char32_t> cps;
    cps.reserve(sentence.true_length);
    for (std::size_t i = 0; i < sentence.true_length; ++i) {
        const auto idx = sentence.indices[i];
        cps.push_back(idx >= CharVocab::kFirstChar ? vocab.char_at(idx) : char32_t{0xFFFD});
    }
    return utf8::encode(cps);
}

std::array<double, kNumClasses> class_distribution(const Corpus& corpus) {
    if (corpus.empty()) {
        throw InputError("class distribution of an empty corpus is undefined");
    }
    std::array<std::size_t, kNumClasses> counts{};
    for (const auto& c : corpus.comments) {
        ++counts[class_index(c.label())];
    }
    std::array<double, kNumClasses> out{};
    const auto n = static_cast<double>(corpus.size());
    for (std::size_t k = 0; k < kNumClasses; ++k) {
        out[k] = static_cast<double>(counts[k]) / n;
    }
    return out;
}

double cohens_kappa(std::span<const Polarity> a, std::span<const Polarity> b) {
    if (a.size() != b.size()) {
        throw InputError("annotation sequences differ in length (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
    }
    if (a.empty()) {
        throw InputError("kappa requires at least one annotated item");
    }
    std::array<std::uint64_t, kNumClasses> count_a{};
    std::array<std::uint64_t, kNumClasses> count_b{};
    std::uint64_t agree = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++count_a[class_index(a[i])];
        ++count_b[class_index(b[i])];
        agree += a[i] == b[i] ? 1 : 0;
    }
    // Integer form: kappa = (n*agree - sum a_c b_c) / (n^2 - sum a_c b_c).
    const auto n = static_cast<std::uint64_t>(a.size());
    std::uint64_t chance = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
        chance += count_a[k] * count_b[k];
    }
    const std::uint64_t n2 = n * n;
    if (chance == n2) {
        throw InputError("kappa is undefined: expected agreement is 1");
    }
    const auto num = static_cast<double>(static_cast<std::int64_t>(n * agree) -
                                         static_cast<std::int64_t>(chance));
    const auto den = static_cast<double>(n2 - chance);
    return num / den;
}

std::vector<Polarity> load_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open label file '" + path.string() + "'");
    }
    std::vector<Polarity> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto token = trim(line);
        if (token.empty()) {
            continue;
        }
        const auto label = parse_polarity(token);
        if (!label) {
            throw InputError("unknown label '" + std::string(token) + "' at line " +
                             std::to_string(line_no));
        }
        labels.push_back(*label);
    }
    return labels;
}

} // namespace msenti::corpus
