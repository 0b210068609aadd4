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

#include "msenti/text_features.hpp"

#include <algorithm>
#include <cmath>

#include "msenti/error.hpp"
#include "msenti/utf8.hpp"

namespace msenti::baselines {

namespace {

bool is_ascii_punct(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (u >= 0x21 && u <= 0x2F) || (u >= 0x3A && u <= 0x40) || (u >= 0x5B && u <= 0x60) ||
           (u >= 0x7B && u <= 0x7E);
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    const std::string lower = utf8::to_lower_ascii(text);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < lower.size()) {
        while (i < lower.size() && is_space(lower[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < lower.size() && !is_space(lower[j])) {
            ++j;
        }
        std::size_t b = i;
        std::size_t e = j;
        while (b < e && is_ascii_punct(lower[b])) {
            ++b;
        }
        while (e > b && is_ascii_punct(lower[e - 1])) {
            --e;
        }
        if (e > b) {
            tokens.emplace_back(lower.substr(b, e - b));
        }
        i = j;
    }
    return tokens;
}

SparseVec SparseVec::from_pairs(std::vector<SparseEntry> pairs) {
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    SparseVec v;
    for (const auto& p : pairs) {
        if (!std::isfinite(p.value)) {
            throw InputError("sparse vector value is not finite");
        }
        if (!v.entries_.empty() && v.entries_.back().index == p.index) {
            v.entries_.back().value += p.value;
        } else {
            v.entries_.push_back(p);
        }
    }
    return v;
}

SparseVec SparseVec::binarized() const {
    SparseVec v;
    for (const auto& e : entries_) {
        if (e.value != 0.0) {
            v.entries_.push_back({e.index, 1.0});
        }
    }
    return v;
}

double SparseVec::dot(std::span<const double> dense) const {
    double s = 0.0;
    for (const auto& e : entries_) {
        s += e.value * dense[e.index];
    }
    return s;
}

double SparseVec::norm2() const {
    double s = 0.0;
    for (const auto& e : entries_) {
        s += e.value * e.value;
    }
    return std::sqrt(s);
}

void NGramVocab::add(const std::string& ngram) {
    if (!index_.contains(ngram)) {
        index_.emplace(ngram, static_cast<std::uint32_t>(ngrams_.size()));
        ngrams_.push_back(ngram);
    }
}

NGramVocab NGramVocab::build(std::span<const std::vector<std::string>> documents,
                             NGramRange range) {
    NGramVocab vocab;
    vocab.range_ = range;
    for (const auto& tokens : documents) {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            vocab.add(tokens[i]);
            if (range == NGramRange::unigram_bigram && i + 1 < tokens.size()) {
                vocab.add(tokens[i] + ' ' + tokens[i + 1]);
            }
        }
    }
    return vocab;
}

NGramVocab NGramVocab::from_ngrams(std::vector<std::string> ngrams, NGramRange range) {
    NGramVocab vocab;
    vocab.range_ = range;
    for (const auto& g : ngrams) {
        if (vocab.index_.contains(g)) {
            throw InputError("duplicate n-gram '" + g + "' in vocabulary");
        }
        vocab.add(g);
    }
    return vocab;
}

std::optional<std::uint32_t> NGramVocab::index_of(const std::string& ngram) const {
    const auto it = index_.find(ngram);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

SparseVec ngram_vectorize(std::span<const std::string> tokens, const NGramVocab& vocab) {
    std::vector<SparseEntry> pairs;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (const auto idx = vocab.index_of(tokens[i])) {
            pairs.push_back({*idx, 1.0});
        }
        if (vocab.range() == NGramRange::unigram_bigram && i + 1 < tokens.size()) {
            if (const auto idx = vocab.index_of(tokens[i] + ' ' + tokens[i + 1])) {
                pairs.push_back({*idx, 1.0});
            }
        }
    }
    return SparseVec::from_pairs(std::move(pairs));
}

TfIdf TfIdf::fit(std::span<const SparseVec> train_counts, std::size_t dimension) {
    TfIdf t;
    t.num_docs_ = train_counts.size();
    t.doc_freq_.assign(dimension, 0.0);
    for (const auto& doc : train_counts) {
        for (const auto& e : doc.entries()) {
            if (e.index >= dimension) {
                throw InputError("tf-idf: feature index beyond dimension");
            }
            if (e.value != 0.0) {
                t.doc_freq_[e.index] += 1.0;
            }
        }
    }
    return t;
}

TfIdf TfIdf::from_stats(std::vector<double> doc_freq, std::size_t num_docs) {
    TfIdf t;
    t.doc_freq_ = std::move(doc_freq);
    t.num_docs_ = num_docs;
    return t;
}

double TfIdf::idf(std::uint32_t feature) const {
    if (feature >= doc_freq_.size() || doc_freq_[feature] == 0.0) {
        return 0.0;
    }
    return std::log(static_cast<double>(num_docs_) / doc_freq_[feature]);
}

SparseVec TfIdf::transform(const SparseVec& counts) const {
    std::vector<SparseEntry> pairs;
    for (const auto& e : counts.entries()) {
        pairs.push_back({e.index, e.value * idf(e.index)});
    }
    SparseVec weighted = SparseVec::from_pairs(std::move(pairs));
    const double norm = weighted.norm2();
    if (norm == 0.0) {
        return weighted;
    }
    std::vector<SparseEntry> scaled;
    for (const auto& e : weighted.entries()) {
        scaled.push_back({e.index, e.value / norm});
    }
    return SparseVec::from_pairs(std::move(scaled));
}

std::string_view feature_kind_name(FeatureKind kind) {
    switch (kind) {
    case FeatureKind::unigram: return "uni";
    case FeatureKind::unigram_bigram: return "unibi";
    case FeatureKind::tfidf: return "tfidf";
    }
    return "unknown";
}

std::optional<FeatureKind> parse_feature_kind(std::string_view name) {
    if (name == "uni") {
        return FeatureKind::unigram;
    }
    if (name == "unibi") {
        return FeatureKind::unigram_bigram;
    }
    if (name == "tfidf") {
        return FeatureKind::tfidf;
    }
    return std::nullopt;
}

Featurizer Featurizer::fit(const corpus::Corpus& train, FeatureKind kind) {
    if (train.empty()) {
        throw InputError("cannot fit features on an empty corpus");
    }
    std::vector<std::vector<std::string>> docs;
    docs.reserve(train.size());
    for (const auto& c : train.comments) {
        docs.push_back(tokenize(c.text()));
    }
    Featurizer f;
    f.kind_ = kind;
    f.vocab_ = NGramVocab::build(docs, kind == FeatureKind::unigram_bigram
                                           ? NGramRange::unigram_bigram
                                           : NGramRange::unigram);
    if (kind == FeatureKind::tfidf) {
        std::vector<SparseVec> counts;
        counts.reserve(docs.size());
        for (const auto& d : docs) {
            counts.push_back(ngram_vectorize(d, f.vocab_));
        }
        f.tfidf_ = TfIdf::fit(counts, f.vocab_.size());
    }
    return f;
}

Featurizer Featurizer::restore(FeatureKind kind, NGramVocab vocab, std::optional<TfIdf> tfidf) {
    if ((kind == FeatureKind::tfidf) != tfidf.has_value()) {
        throw InputError("tf-idf statistics must be present exactly for tfidf features");
    }
    Featurizer f;
    f.kind_ = kind;
    f.vocab_ = std::move(vocab);
    f.tfidf_ = std::move(tfidf);
    return f;
}

SparseVec Featurizer::transform(std::string_view text) const {
    const auto tokens = tokenize(text);
    SparseVec counts = ngram_vectorize(tokens, vocab_);
    return tfidf_ ? tfidf_->transform(counts) : counts;
}

Dataset featurize(const corpus::Corpus& corpus, const Featurizer& featurizer) {
    Dataset d;
    d.dimension = featurizer.dimension();
    d.x.reserve(corpus.size());
    d.y.reserve(corpus.size());
    for (const auto& c : corpus.comments) {
        d.x.push_back(featurizer.transform(c.text()));
        d.y.push_back(corpus::class_index(c.label()));
    }
    return d;
}

} // namespace msenti::baselines
