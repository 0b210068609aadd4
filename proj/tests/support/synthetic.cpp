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

#include "synthetic.hpp"

#include "msenti/rng.hpp"

namespace msenti::testing {

namespace {

bool contains_planted(const std::string& word) {
    for (const auto* list : {&kPositiveMorphemes, &kNegativeMorphemes}) {
        for (const auto& m : *list) {
            if (word.find(m) != std::string::npos) {
                return true;
            }
        }
    }
    return false;
}

std::string random_word(Xoshiro256& rng, const PlantedConfig& cfg) {
    for (;;) {
        const std::size_t len =
            cfg.min_word_len + rng.below(cfg.max_word_len - cfg.min_word_len + 1);
        std::string w;
        for (std::size_t i = 0; i < len; ++i) {
            w += static_cast<char>('a' + rng.below(26));
        }
        if (!contains_planted(w)) {
            return w;
        }
    }
}

std::string perturb_with(const std::string& word, Xoshiro256& rng) {
    std::string w = word;
    switch (rng.below(3)) {
    case 0: { // swap two adjacent characters
        const std::size_t i = rng.below(w.size() - 1);
        std::swap(w[i], w[i + 1]);
        break;
    }
    case 1: { // repeat one character
        const std::size_t i = rng.below(w.size());
        w.insert(w.begin() + static_cast<std::ptrdiff_t>(i), w[i]);
        break;
    }
    default: { // drop one character
        const std::size_t i = rng.below(w.size());
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        break;
    }
    }
    return w;
}

} // namespace

std::string perturb(const std::string& word, std::uint64_t& state) {
    Xoshiro256 rng(state++);
    return perturb_with(word, rng);
}

std::vector<PlantedSentence> planted_sentences(const PlantedConfig& cfg) {
    Xoshiro256 rng(cfg.seed);
    std::vector<PlantedSentence> out;
    out.reserve(cfg.sentences);
    for (std::size_t s = 0; s < cfg.sentences; ++s) {
        const auto label = corpus::polarity_from_index(s % corpus::kNumClasses);
        const std::size_t n_words = cfg.min_words + rng.below(cfg.max_words - cfg.min_words + 1);
        std::vector<std::string> words;
        for (std::size_t i = 0; i < n_words; ++i) {
            words.push_back(random_word(rng, cfg));
        }
        std::size_t planted_at = words.size();
        if (label != corpus::Polarity::neutral) {
            const auto& pool =
                label == corpus::Polarity::positive ? kPositiveMorphemes : kNegativeMorphemes;
            std::string planted = pool[rng.below(pool.size())];
            if (rng.uniform() < cfg.perturb_rate) {
                planted = perturb_with(planted, rng);
            }
            planted_at = rng.below(words.size() + 1);
            words.insert(words.begin() + static_cast<std::ptrdiff_t>(planted_at), planted);
        }
        PlantedSentence ps{"", label, 0, 0};
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (i > 0) {
                ps.text += ' ';
            }
            if (i == planted_at) {
                ps.planted_begin = ps.text.size();
                ps.planted_length = words[i].size();
            }
            ps.text += words[i];
        }
        out.push_back(std::move(ps));
    }
    return out;
}

corpus::Corpus planted_corpus(const std::vector<PlantedSentence>& sentences) {
    corpus::Corpus c;
    c.provenance = "planted-morpheme";
    for (const auto& s : sentences) {
        c.comments.emplace_back(s.text, s.label);
    }
    return c;
}

} // namespace msenti::testing
