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

#ifndef MSENTI_CORPUS_HPP
#define MSENTI_CORPUS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace msenti::corpus {

/// Three-level polarity. The numeric values are the class indices used by
/// every classifier and by the confusion matrix.
enum class Polarity : std::uint8_t { negative = 0, neutral = 1, positive = 2 };

inline constexpr std::size_t kNumClasses = 3;

constexpr std::size_t class_index(Polarity p) { return static_cast<std::size_t>(p); }
Polarity polarity_from_index(std::size_t index);
std::string_view polarity_name(Polarity p);

/// Accepts negative/neutral/positive in any case, or the digits 0/1/2.
std::optional<Polarity> parse_polarity(std::string_view token);

/// One annotated comment. The text is never blank.
class LabeledComment {
public:
    LabeledComment(std::string text, Polarity label);

    const std::string& text() const { return text_; }
    Polarity label() const { return label_; }

    friend bool operator==(const LabeledComment&, const LabeledComment&) = default;

private:
    std::string text_;
    Polarity label_;
};

/// Comments in file order. Nothing reorders them except split_corpus.
struct Corpus {
    std::vector<LabeledComment> comments;
    std::string provenance;

    std::size_t size() const { return comments.size(); }
    bool empty() const { return comments.empty(); }
    std::vector<Polarity> labels() const;
};

Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::istream& in, std::string provenance);
/// Writes `text<TAB>label-name` lines; load_corpus reads them back unchanged.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct FilterReport {
    std::size_t input = 0;
    std::size_t kept = 0;
    std::size_t non_roman = 0;
    std::size_t too_long = 0;
};

struct FilterResult {
    Corpus corpus;
    FilterReport report;
};

inline constexpr std::size_t kDefaultMaxWords = 50;

/// ASCII letters, digits, punctuation and whitespace only.
bool is_roman_script(std::string_view text);
std::size_t word_count(std::string_view text);

/// Drops comments outside the roman-script whitelist, then comments with
/// more than max_words whitespace tokens. A comment failing both rules is
/// counted once, as non_roman.
FilterResult filter_comments(const Corpus& corpus, std::size_t max_words = kDefaultMaxWords);

struct SplitSizes {
    std::size_t train = 0;
    std::size_t validation = 0;
    std::size_t test = 0;
};

/// test = floor(0.2 N); validation = floor(0.2 (N - test)); train = rest.
SplitSizes split_sizes(std::size_t n);

struct SplitSet {
    Corpus train;
    Corpus validation;
    Corpus test;
    std::uint64_t seed = 0;
};

/// Seeded random partition into train/validation/test. Within each part the
/// comments keep their original relative order.
SplitSet split_corpus(const Corpus& corpus, std::uint64_t seed);

/// Writes train.tsv, validation.tsv, test.tsv and manifest.json into dir.
void write_split(const SplitSet& split, const FilterReport& report,
                 const std::filesystem::path& dir);
SplitSet read_split(const std::filesystem::path& dir);

/// Character inventory of the lowercased training text plus two reserved
/// entries: pad (0) and out-of-vocabulary (1). Real characters are numbered
/// from 2 in order of first appearance.
class CharVocab {
public:
    static constexpr std::int32_t kPad = 0;
    static constexpr std::int32_t kOov = 1;
    static constexpr std::int32_t kFirstChar = 2;

    CharVocab() = default;

    static CharVocab build(const Corpus& train);
    /// Restores a vocabulary from its ordered character list. Characters
    /// must be distinct and already lowercase.
    static CharVocab from_chars(std::vector<char32_t> chars);

    std::int32_t index_of(char32_t c) const;
    /// Character for a real index; throws for pad/oov or out-of-range.
    char32_t char_at(std::int32_t index) const;
    bool contains(char32_t c) const { return index_.contains(c); }

    /// Total number of indices, including pad and oov.
    std::size_t size() const { return chars_.size() + kFirstChar; }
    const std::vector<char32_t>& chars() const { return chars_; }

    friend bool operator==(const CharVocab& a, const CharVocab& b) { return a.chars_ == b.chars_; }

private:
    void add(char32_t c);

    std::vector<char32_t> chars_;
    std::unordered_map<char32_t, std::int32_t> index_;
};

inline constexpr std::size_t kDefaultMaxLen = 200;

struct EncodedSentence {
    std::vector<std::int32_t> indices;
    std::size_t true_length = 0;
};

/// Lowercase, map through the vocabulary, truncate to max_len and right-pad.
EncodedSentence encode_sentence(std::string_view text, const CharVocab& vocab,
                                std::size_t max_len = kDefaultMaxLen);
/// Inverse of encode_sentence over the first true_length positions. OOV
/// positions decode to U+FFFD.
std::string decode_sentence(const EncodedSentence& sentence, const CharVocab& vocab);

/// Proportions of negative, neutral, positive.
std::array<double, kNumClasses> class_distribution(const Corpus& corpus);

/// Cohen's kappa between two annotators over the three polarity classes.
double cohens_kappa(std::span<const Polarity> a, std::span<const Polarity> b);

/// One label per line (names or digits); blank lines are skipped.
std::vector<Polarity> load_labels(const std::filesystem::path& path);

} // namespace msenti::corpus

#endif // MSENTI_CORPUS_HPP
