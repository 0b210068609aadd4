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

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "msenti/corpus.hpp"
#include "msenti/error.hpp"
#include "msenti/rng.hpp"
#include "temp_dir.hpp"

using namespace msenti;
using namespace msenti::corpus;

namespace {

Corpus parse(const std::string& text) {
    std::istringstream in(text);
    return parse_corpus(in, "memory");
}

Corpus numbered(std::size_t n) {
    Corpus c;
    for (std::size_t i = 0; i < n; ++i) {
        c.comments.emplace_back("comment " + std::to_string(i), polarity_from_index(i % 3));
    }
    return c;
}

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("load_corpus maps lines to comments") {
    const auto c = parse("bahut accha\tpositive\nabe kutte tere se kon baat karega\tnegative\n");
    REQUIRE(c.size() == 2);
    CHECK(c.comments[0].text() == "bahut accha");
    CHECK(c.comments[0].label() == Polarity::positive);
    CHECK(c.comments[1].label() == Polarity::negative);
    CHECK(c.provenance == "memory");
}

TEST_CASE("labels are case-insensitive names or digits") {
    const auto c = parse("a\tNEGATIVE\nb\tNeutral\nc\t2\nd\t0\ne\t1\n");
    const std::vector<Polarity> want = {Polarity::negative, Polarity::neutral, Polarity::positive,
                                        Polarity::negative, Polarity::neutral};
    CHECK(c.labels() == want);
}

TEST_CASE("malformed input names the offending line or token") {
    CHECK(error_of([] { parse("ok\tpositive\nhello\tmaybe\n"); }) == "unknown label 'maybe' at line 2");
    CHECK(error_of([] { parse("ok\tpositive\nno tab here\n"); }).find("malformed line 2") == 0);
    CHECK(error_of([] { parse("   \tpositive\n"); }).find("line 1") != std::string::npos);
}

TEST_CASE("blank lines, CRLF endings and a BOM are tolerated") {
    const auto c = parse("\xEF\xBB\xBFhi there\tpositive\r\n\r\n\nbye\tnegative\r\n");
    REQUIRE(c.size() == 2);
    CHECK(c.comments[0].text() == "hi there");
    CHECK(c.comments[1].text() == "bye");
}

TEST_CASE("text containing tabs splits on the last tab") {
    const auto c = parse("a\tb\tneutral\n");
    REQUIRE(c.size() == 1);
    CHECK(c.comments[0].text() == "a\tb");
}

TEST_CASE("missing corpus file is an I/O error") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.tsv"), IoError);
}

TEST_CASE("LabeledComment rejects blank text") {
    CHECK_THROWS_AS(LabeledComment("  \t ", Polarity::neutral), InputError);
}

TEST_CASE("write_corpus then load_corpus round-trips") {
    testing::TempDir dir;
    const auto c = parse("x y\tpositive\nz\tneutral\n");
    write_corpus(c, dir / "c.tsv");
    const auto back = load_corpus(dir / "c.tsv");
    CHECK(back.comments == c.comments);
}

TEST_CASE("filter_comments applies the roman-script and length rules") {
    Corpus c;
    c.comments.emplace_back("Trailer dhannnsu hai bhai", Polarity::positive);
    c.comments.emplace_back("yeh \xE0\xA4\xA8 hai", Polarity::neutral); // Devanagari NA
    std::string long_text;
    for (int i = 0; i < 51; ++i) {
        long_text += "w ";
    }
    c.comments.emplace_back(long_text, Polarity::negative);
    std::string fifty;
    for (int i = 0; i < 50; ++i) {
        fifty += "w ";
    }
    c.comments.emplace_back(fifty, Polarity::negative);

    const auto r = filter_comments(c);
    CHECK(r.report.input == 4);
    CHECK(r.report.kept == 2);
    CHECK(r.report.non_roman == 1);
    CHECK(r.report.too_long == 1);
    CHECK(r.corpus.comments[0].text() == "Trailer dhannnsu hai bhai");
    CHECK(word_count(fifty) == 50);
}

TEST_CASE("is_roman_script whitelist") {
    CHECK(is_roman_script("sir hlp plzz naa!! :) 100%"));
    CHECK(is_roman_script("tab\tand newline\n"));
    CHECK_FALSE(is_roman_script("caf\xC3\xA9"));
    CHECK_FALSE(is_roman_script(std::string("nul\0x", 5)));
}

TEST_CASE("filter_comments is idempotent on random corpora") {
    Xoshiro256 rng(5);
    const std::vector<std::string> pieces = {"ok", "bhai", "\xE0\xA4\xA8", "x", "!!", "caf\xC3\xA9"};
    for (int trial = 0; trial < 50; ++trial) {
        Corpus c;
        const auto n = 1 + rng.below(20);
        for (std::uint64_t i = 0; i < n; ++i) {
            std::string text;
            const auto words = 1 + rng.below(8);
            for (std::uint64_t w = 0; w < words; ++w) {
                text += pieces[rng.below(pieces.size())] + " ";
            }
            c.comments.emplace_back(text, polarity_from_index(rng.below(3)));
        }
        const auto max_words = static_cast<std::size_t>(1 + rng.below(8));
        const auto once = filter_comments(c, max_words);
        const auto twice = filter_comments(once.corpus, max_words);
        CHECK(twice.corpus.comments == once.corpus.comments);
        CHECK(twice.report.kept == once.report.kept);
        CHECK(once.report.kept + once.report.non_roman + once.report.too_long == n);
    }
}

TEST_CASE("split sizes follow the floor rule") {
    auto s = split_sizes(10);
    CHECK(s.train == 7);
    CHECK(s.validation == 1);
    CHECK(s.test == 2);
    s = split_sizes(3879);
    CHECK(s.train == 2484);
    CHECK(s.validation == 620);
    CHECK(s.test == 775);
    s = split_sizes(5);
    CHECK(s.train + s.validation + s.test == 5);
}

TEST_CASE("split_corpus rejects tiny corpora") {
    CHECK_THROWS_AS(split_corpus(numbered(4), 1), InputError);
    CHECK_NOTHROW(split_corpus(numbered(5), 1));
}

TEST_CASE("split_corpus partitions, keeps file order and is deterministic") {
    for (std::size_t n : {5u, 10u, 37u, 200u}) {
        const auto c = numbered(n);
        for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
            const auto s = split_corpus(c, seed);
            const auto want = split_sizes(n);
            CHECK(s.train.size() == want.train);
            CHECK(s.validation.size() == want.validation);
            CHECK(s.test.size() == want.test);

            std::map<std::string, int> seen;
            for (const auto* part : {&s.train, &s.validation, &s.test}) {
                std::size_t last = 0;
                bool first = true;
                for (const auto& cm : part->comments) {
                    ++seen[cm.text()];
                    const auto idx = std::stoul(cm.text().substr(8));
                    CHECK((first || idx > last));
                    last = idx;
                    first = false;
                }
            }
            CHECK(seen.size() == n);
            CHECK(std::all_of(seen.begin(), seen.end(), [](const auto& kv) { return kv.second == 1; }));

            const auto again = split_corpus(c, seed);
            CHECK(again.train.comments == s.train.comments);
            CHECK(again.test.comments == s.test.comments);
        }
    }
    const auto c = numbered(100);
    CHECK(split_corpus(c, 1).test.comments != split_corpus(c, 2).test.comments);
}

TEST_CASE("write_split and read_split round-trip with a manifest") {
    testing::TempDir dir;
    const auto c = numbered(20);
    const auto s = split_corpus(c, 3);
    FilterReport report{21, 20, 1, 0};
    write_split(s, report, dir.path());
    const auto back = read_split(dir.path());
    CHECK(back.train.comments == s.train.comments);
    CHECK(back.validation.comments == s.validation.comments);
    CHECK(back.test.comments == s.test.comments);
    CHECK(back.seed == 3);

    const auto manifest = nlohmann::json::parse(testing::read_file(dir / "manifest.json"));
    CHECK(manifest["sizes"]["train"] == s.train.size());
    CHECK(manifest["filter"]["rejected_non_roman"] == 1);
}

TEST_CASE("vocabulary is built from lowercased train text in first-appearance order") {
    Corpus train;
    train.comments.emplace_back("ab", Polarity::neutral);
    train.comments.emplace_back("ba", Polarity::neutral);
    const auto v = CharVocab::build(train);
    CHECK(v.size() == 4);
    CHECK(v.index_of(U'a') == 2);
    CHECK(v.index_of(U'b') == 3);
    CHECK(v.index_of(U'z') == CharVocab::kOov);
    CHECK(v.char_at(2) == U'a');

    Corpus upper;
    upper.comments.emplace_back("AbA", Polarity::neutral);
    const auto u = CharVocab::build(upper);
    CHECK(u.chars() == std::vector<char32_t>{U'a', U'b'});
    CHECK(u.index_of(U'A') == CharVocab::kOov);
    CHECK(encode_sentence("A", u, 1).indices == std::vector<std::int32_t>{2});
}

TEST_CASE("vocabulary indices are contiguous and never collide with pad/oov") {
    Corpus train;
    train.comments.emplace_back("hello world, kya haal hai?", Polarity::neutral);
    const auto v = CharVocab::build(train);
    std::vector<std::int32_t> idx;
    for (char32_t c : v.chars()) {
        idx.push_back(v.index_of(c));
    }
    std::sort(idx.begin(), idx.end());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        CHECK(idx[i] == static_cast<std::int32_t>(i) + CharVocab::kFirstChar);
    }
    CHECK_THROWS_AS(CharVocab::build(Corpus{}), InputError);
}

TEST_CASE("encode_sentence pads, truncates and maps unknowns to oov") {
    const auto v = CharVocab::from_chars({U'a', U'b'});
    auto e = encode_sentence("ab", v, 4);
    CHECK(e.indices == std::vector<std::int32_t>{2, 3, 0, 0});
    CHECK(e.true_length == 2);

    e = encode_sentence("abab", v, 2);
    CHECK(e.indices == std::vector<std::int32_t>{2, 3});
    CHECK(e.true_length == 2);

    e = encode_sentence("aXb", v, 4);
    CHECK(e.indices == std::vector<std::int32_t>{2, 1, 3, 0});
    e = encode_sentence("AB", v, 2);
    CHECK(e.indices == std::vector<std::int32_t>{2, 3});

    CHECK_THROWS_AS(encode_sentence("", v, 4), InputError);
    CHECK_THROWS_AS(encode_sentence("ab", v, 0), InputError);
}

TEST_CASE("encode then decode reproduces lowercased text") {
    Corpus train;
    train.comments.emplace_back("Trailer dhannnsu hai bhai", Polarity::positive);
    const auto v = CharVocab::build(train);
    const auto e = encode_sentence("BHAI hai trailer", v, 40);
    CHECK(decode_sentence(e, v) == "bhai hai trailer");
}

TEST_CASE("class_distribution") {
    Corpus one;
    one.comments.emplace_back("x", Polarity::positive);
    auto d = class_distribution(one);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == 1.0);

    Corpus c;
    for (int i = 0; i < 3; ++i) c.comments.emplace_back("n", Polarity::negative);
    for (int i = 0; i < 10; ++i) c.comments.emplace_back("u", Polarity::neutral);
    for (int i = 0; i < 7; ++i) c.comments.emplace_back("p", Polarity::positive);
    d = class_distribution(c);
    CHECK(d[0] == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(0.50).epsilon(1e-12));
    CHECK(d[2] == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(std::abs(d[0] + d[1] + d[2] - 1.0) <= 1e-12);
    CHECK_THROWS_AS(class_distribution(Corpus{}), InputError);
}

TEST_CASE("cohens_kappa hand cases") {
    using P = Polarity;
    const std::vector<P> a = {P::positive, P::positive, P::negative, P::negative};
    const std::vector<P> b = {P::positive, P::negative, P::negative, P::negative};
    CHECK(cohens_kappa(a, b) == 0.5);
    CHECK(cohens_kappa(a, a) == 1.0);
    CHECK_THROWS_AS(cohens_kappa(a, std::vector<P>{P::positive}), InputError);
    const std::vector<P> same = {P::neutral, P::neutral};
    CHECK_THROWS_AS(cohens_kappa(same, same), InputError);
}

TEST_CASE("cohens_kappa stays within [-1, 1] and is symmetric") {
    Xoshiro256 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = 2 + rng.below(30);
        std::vector<Polarity> a;
        std::vector<Polarity> b;
        for (std::uint64_t i = 0; i < n; ++i) {
            a.push_back(polarity_from_index(rng.below(3)));
            b.push_back(polarity_from_index(rng.below(3)));
        }
        double k = 0.0;
        try {
            k = cohens_kappa(a, b);
        } catch (const InputError&) {
            continue;
        }
        CHECK(k >= -1.0);
        CHECK(k <= 1.0);
        CHECK(k == cohens_kappa(b, a));
    }
}

TEST_CASE("load_labels reads one label per line") {
    testing::TempDir dir;
    testing::write_file(dir / "a.txt", "positive\nneutral\n\n2\n");
    const auto labels = load_labels(dir / "a.txt");
    CHECK(labels == std::vector<Polarity>{Polarity::positive, Polarity::neutral, Polarity::positive});
    testing::write_file(dir / "b.txt", "positive\nhmm\n");
    CHECK_THROWS_AS(load_labels(dir / "b.txt"), InputError);
}
