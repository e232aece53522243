#include "cprep/corpus.hpp"

#include <random>

#include "doctest.h"

using namespace cprep;

namespace {

LangCode lc(const char* code) { return LangCode::parse(code); }

}  // namespace

TEST_CASE("LangCode accepts exactly three lowercase letters") {
    CHECK(lc("eng").str() == "eng");
    CHECK_THROWS_AS(LangCode::parse("EN"), Error);
    CHECK_THROWS_AS(LangCode::parse("engl"), Error);
    CHECK_THROWS_AS(LangCode::parse("e1g"), Error);
    CHECK_THROWS_AS(LangCode::parse("ENG"), Error);
}

TEST_CASE("parse_bitext_line binds fields by column spec") {
    const ColumnSpec plain;
    const auto pair = parse_bitext_line(
        "eng\tfuv\tHello world, how are you today?\tSannu duniya, yaya kake yau?", plain);
    CHECK(pair.src_lang == lc("eng"));
    CHECK(pair.tgt_lang == lc("fuv"));
    CHECK(pair.src == "Hello world, how are you today?");
    CHECK(pair.tgt == "Sannu duniya, yaya kake yau?");
    CHECK(pair.scores.empty());
}

TEST_CASE("parse_bitext_line rejects malformed lines") {
    const ColumnSpec plain;
    CHECK_THROWS_WITH_AS(parse_bitext_line("eng\tfuv", plain), doctest::Contains("MalformedLine"),
                         Error);
    CHECK_THROWS_AS(parse_bitext_line("eng\tfuv\ta\tb\textra", plain), Error);
    CHECK_THROWS_AS(parse_bitext_line("e!g\tfuv\ta\tb", plain), Error);   // BadLangCode
    CHECK_THROWS_AS(parse_bitext_line("eng\tfuv\t\tb", plain), Error);    // empty text
    CHECK_THROWS_AS(parse_bitext_line("eng\tfuv\ta\tb\xFF", plain), Error);  // invalid UTF-8
}

TEST_CASE("score columns parse as floats and may be omitted") {
    const ColumnSpec spec({"src_lang", "tgt_lang", "src", "tgt", "laser_score"});
    const auto pair = parse_bitext_line("eng\tfuv\ts\tt\t1.07", spec);
    CHECK(pair.scores.at("laser_score") == doctest::Approx(1.07));

    const auto without = parse_bitext_line("eng\tfuv\ts\tt", spec);
    CHECK(without.scores.empty());

    CHECK_THROWS_WITH_AS(parse_bitext_line("eng\tfuv\ts\tt\tnot-a-number", spec),
                         doctest::Contains("BadScore"), Error);
}

TEST_CASE("serialize_pair round-trips and formats scores plainly") {
    const ColumnSpec spec({"src_lang", "tgt_lang", "src", "tgt", "laser_score"});
    auto pair = SentencePair::make(lc("eng"), lc("fuv"), "hello", "sannu",
                                   {{"laser_score", 1.06}});
    const std::string line = serialize_pair(pair, spec);
    CHECK(line == "eng\tfuv\thello\tsannu\t1.06");
    CHECK(parse_bitext_line(line, spec) == pair);
}

TEST_CASE("embedded tabs and newlines are replaced with spaces at construction") {
    const auto pair = SentencePair::make(lc("eng"), lc("fra"), "a\tb", "c\nd");
    CHECK(pair.src == "a b");
    CHECK(pair.tgt == "c d");
    const std::string line = serialize_pair(pair, ColumnSpec());
    CHECK(line.find("a b") != std::string::npos);
    // Round-trip through the wire format is the identity.
    CHECK(parse_bitext_line(line, ColumnSpec()) == pair);
}

TEST_CASE("parse/serialize round-trip on random pairs") {
    std::mt19937_64 gen(7);
    const ColumnSpec spec = ColumnSpec::with_default_scores();
    const char* langs[] = {"eng", "fra", "fuv", "fon", "yor", "wol", "swh"};
    std::uniform_int_distribution<int> lang(0, 6);
    std::uniform_int_distribution<int> len(1, 30);
    std::uniform_int_distribution<int> ch(32, 126);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 300; ++trial) {
        auto text = [&] {
            std::string s;
            const int n = len(gen);
            for (int i = 0; i < n; ++i) {
                char c = static_cast<char>(ch(gen));
                s.push_back(c);
            }
            if (s.find_first_not_of(" \t") == std::string::npos) s = "x";
            return s;
        };
        Scores scores;
        if (coin(gen)) scores["laser_score"] = 1.0 + trial * 0.001;
        if (coin(gen)) {
            scores["src_lang_score"] = 0.5;
            scores["tgt_lang_score"] = 0.25;
        }
        const auto pair =
            SentencePair::make(lc(langs[lang(gen)]), lc(langs[lang(gen)]), text(), text(), scores);
        const auto back = parse_bitext_line(serialize_pair(pair, spec), spec);
        CHECK(back == pair);
    }
}

TEST_CASE("split_pair_to_mono splits sides and propagates scores") {
    const auto pair = SentencePair::make(lc("fuv"), lc("fon"), "source text", "target text",
                                         {{"laser_score", 1.2}});
    const auto [src_rec, tgt_rec] = split_pair_to_mono(pair);
    CHECK(src_rec.lang == lc("fuv"));
    CHECK(src_rec.text == "source text");
    CHECK(tgt_rec.lang == lc("fon"));
    CHECK(tgt_rec.text == "target text");
    CHECK(src_rec.scores.at("laser_score") == doctest::Approx(1.2));
    CHECK(tgt_rec.scores.at("laser_score") == doctest::Approx(1.2));
    // Total characters preserved.
    CHECK(src_rec.text.size() + tgt_rec.text.size() == pair.src.size() + pair.tgt.size());

    const auto [e, y] = split_pair_to_mono(SentencePair::make(lc("eng"), lc("yor"), "a b", "c d"));
    CHECK(e.lang == lc("eng"));
    CHECK(y.lang == lc("yor"));
}

TEST_CASE("mono lines parse with and without scores") {
    const MonoColumnSpec spec({"lang", "text", "lang_score"});
    const auto rec = parse_mono_line("yor\tsome text\t0.97", spec);
    CHECK(rec.lang == lc("yor"));
    CHECK(rec.text == "some text");
    CHECK(rec.scores.at("lang_score") == doctest::Approx(0.97));
    CHECK(serialize_mono(rec, spec) == "yor\tsome text\t0.97");

    const auto plain = parse_mono_plain_line("bare text line", lc("wol"));
    CHECK(plain.lang == lc("wol"));
    CHECK(plain.text == "bare text line");
}

TEST_CASE("drop reasons form a closed enumeration") {
    for (int i = 0; i < kNumDropReasons; ++i) {
        const auto reason = static_cast<DropReason>(i);
        const auto name = drop_reason_name(reason);
        CHECK(name != "Unknown");
        CHECK(drop_reason_from_name(name) == reason);
    }
    CHECK(drop_reason_from_name("NotAReason") == std::nullopt);
}
