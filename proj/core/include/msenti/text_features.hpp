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

#ifndef MSENTI_TEXT_FEATURES_HPP
#define MSENTI_TEXT_FEATURES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "msenti/corpus.hpp"

namespace msenti::baselines {

/// Lowercase, split on whitespace, strip leading/trailing ASCII
/// punctuation from each token, drop empty tokens.
std::vector<std::string> tokenize(std::string_view text);

struct SparseEntry {
    std::uint32_t index = 0;
    double value = 0.0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sparse vector with strictly increasing indices.
class SparseVec {
public:
    SparseVec() = default;
    /// Sorts by index and sums duplicates.
    static SparseVec from_pairs(std::vector<SparseEntry> pairs);

    std::span<const SparseEntry> entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Every non-zero value replaced by 1.
    SparseVec binarized() const;
    double dot(std::span<const double> dense) const;
    double norm2() const;

    friend bool operator==(const SparseVec&, const SparseVec&) = default;

private:
    std::vector<SparseEntry> entries_;
};

enum class NGramRange { unigram = 1, unigram_bigram = 2 };

/// n-gram -> feature index, numbered by first appearance in the training
/// documents. A bigram is stored as its two tokens joined by one space,
/// which cannot collide with a unigram because tokens never contain
/// whitespace.
class NGramVocab {
public:
    NGramVocab() = default;

    static NGramVocab build(std::span<const std::vector<std::string>> documents, NGramRange range);
    static NGramVocab from_ngrams(std::vector<std::string> ngrams, NGramRange range);

    std::optional<std::uint32_t> index_of(const std::string& ngram) const;
    std::size_t size() const { return ngrams_.size(); }
    NGramRange range() const { return range_; }
    const std::vector<std::string>& ngrams() const { return ngrams_; }

private:
    void add(const std::string& ngram);

    NGramRange range_ = NGramRange::unigram;
    std::vector<std::string> ngrams_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// Counts of in-vocabulary unigrams (and contiguous bigrams when the
/// vocabulary covers them). Unknown n-grams are dropped.
SparseVec ngram_vectorize(std::span<const std::string> tokens, const NGramVocab& vocab);

/// tf * ln(N / df) followed by L2 normalization, with N and df frozen from
/// the training documents. Features never seen in training weigh 0; an
/// all-zero document stays zero.
class TfIdf {
public:
    TfIdf() = default;
    static TfIdf fit(std::span<const SparseVec> train_counts, std::size_t dimension);
    static TfIdf from_stats(std::vector<double> doc_freq, std::size_t num_docs);

    SparseVec transform(const SparseVec& counts) const;
    double idf(std::uint32_t feature) const;

    const std::vector<double>& doc_freq() const { return doc_freq_; }
    std::size_t num_docs() const { return num_docs_; }

private:
    std::vector<double> doc_freq_;
    std::size_t num_docs_ = 0;
};

/// Table-5 style feature sets: unigram counts, unigram+bigram counts, or
/// unigram tf-idf.
enum class FeatureKind { unigram, unigram_bigram, tfidf };

std::string_view feature_kind_name(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view name);

/// Text -> SparseVec pipeline fitted on a training corpus.
class Featurizer {
public:
    Featurizer() = default;
    static Featurizer fit(const corpus::Corpus& train, FeatureKind kind);
    static Featurizer restore(FeatureKind kind, NGramVocab vocab, std::optional<TfIdf> tfidf);

    SparseVec transform(std::string_view text) const;
    std::size_t dimension() const { return vocab_.size(); }
    FeatureKind kind() const { return kind_; }
    const NGramVocab& vocab() const { return vocab_; }
    const std::optional<TfIdf>& tfidf() const { return tfidf_; }

private:
    FeatureKind kind_ = FeatureKind::unigram;
    NGramVocab vocab_;
    std::optional<TfIdf> tfidf_;
};

/// Featurized documents with class indices.
struct Dataset {
    std::vector<SparseVec> x;
    std::vector<std::size_t> y;
    std::size_t dimension = 0;

    std::size_t size() const { return x.size(); }
};

Dataset featurize(const corpus::Corpus& corpus, const Featurizer& featurizer);

} // namespace msenti::baselines

#endif // MSENTI_TEXT_FEATURES_HPP
