#include "cprep/textnorm.hpp"

#include <random>

#include "doctest.h"

#include "cprep/unicode.hpp"
#include "cprep/utf8.hpp"

using namespace cprep;

TEST_CASE("strip_diacritics removes accents") {
    CHECK(strip_diacritics("ọmọdé") == "omode");
    CHECK(strip_diacritics("hello") == "hello");
    CHECK(strip_diacritics("café naïve") == "cafe naive");
    CHECK(strip_diacritics("Ẹ̀yìn") == "Eyin");
    // Combining marks written separately strip as well.
    CHECK(strip_diacritics("e\xCC\x81") == "e");  // e + U+0301
}

TEST_CASE("strip_diacritics is idempotent on random unicode") {
    std::mt19937_64 gen(20220811);
    std::uniform_int_distribution<std::uint32_t> plane(0, 0x2FFFF);
    std::uniform_int_distribution<int> len(0, 24);
    for (int trial = 0; trial < 1000; ++trial) {
        std::u32string s;
        const int n = len(gen);
        for (int i = 0; i < n; ++i) {
            char32_t cp = plane(gen);
            if (cp >= 0xD800 && cp <= 0xDFFF) cp = 0xFFFD;
            s.push_back(cp);
        }
        const std::string text = utf8::encode(s);
        const std::string once = strip_diacritics(text);
        CHECK(strip_diacritics(once) == once);
        // No combining marks survive.
        for (char32_t cp : utf8::decode(once)) {
            CHECK_FALSE(uni::is_combining_mark(cp));
        }
    }
}

TEST_CASE("extract_numbers finds maximal digit runs as a multiset") {
    const auto nums = extract_numbers("I have 3 cats and 12 dogs");
    CHECK(nums == std::map<std::string, int>{{"3", 1}, {"12", 1}});
    CHECK(extract_numbers("no digits here").empty());
    CHECK(extract_numbers("v1.2.3") == std::map<std::string, int>{{"1", 1}, {"2", 1}, {"3", 1}});
    CHECK(extract_numbers("7 and 7") == std::map<std::string, int>{{"7", 2}});
    // Fullwidth digits fold to ASCII.
    CHECK(extract_numbers("\xEF\xBC\x93 cats") == std::map<std::string, int>{{"3", 1}});
}

TEST_CASE("extract_numbers is order independent") {
    CHECK(extract_numbers("3 cats, 12 dogs") == extract_numbers("12 dogs, 3 cats"));
}

namespace {

// Independent stack-matching oracle for balanced parenthetical spans.
std::vector<std::pair<std::size_t, std::size_t>> oracle_outer_spans(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> complete;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') stack.push_back(i);
        if (text[i] == ')' && !stack.empty()) {
            complete.emplace_back(stack.back(), i);
            stack.pop_back();
        }
    }
    // Keep spans not nested inside another completed span.
    std::vector<std::pair<std::size_t, std::size_t>> outer;
    for (const auto& a : complete) {
        bool nested = false;
        for (const auto& b : complete) {
            if (&a != &b && b.first < a.first && a.second < b.second) nested = true;
        }
        if (!nested) outer.push_back(a);
    }
    std::sort(outer.begin(), outer.end());
    return outer;
}

}  // namespace

TEST_CASE("paren_profile counts and outermost spans") {
    const auto p1 = paren_profile("a (b) c");
    CHECK(p1.open_count == 1);
    CHECK(p1.close_count == 1);
    REQUIRE(p1.spans.size() == 1);
    CHECK(p1.spans[0].start == 2);
    CHECK(p1.spans[0].end == 4);

    const auto p2 = paren_profile("a (b (c)) d");
    CHECK(p2.open_count == 2);
    CHECK(p2.close_count == 2);
    REQUIRE(p2.spans.size() == 1);
    CHECK(p2.spans[0].start == 2);
    CHECK(p2.spans[0].end == 8);

    const auto p3 = paren_profile("a ( b");
    CHECK(p3.open_count == 1);
    CHECK(p3.close_count == 0);
    CHECK(p3.spans.empty());
}

TEST_CASE("paren_profile matches the stack oracle on random strings") {
    std::mt19937_64 gen(99);
    const char alphabet[] = "(()) ab";
    std::uniform_int_distribution<int> pick(0, 6);
    std::uniform_int_distribution<int> len(0, 20);
    for (int trial = 0; trial < 500; ++trial) {
        std::string s;
        const int n = len(gen);
        for (int i = 0; i < n; ++i) s.push_back(alphabet[pick(gen)]);
        const auto profile = paren_profile(s);
        const auto expected = oracle_outer_spans(s);
        REQUIRE(profile.spans.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(profile.spans[i].start == expected[i].first);
            CHECK(profile.spans[i].end == expected[i].second);
            CHECK(s[profile.spans[i].start] == '(');
            CHECK(s[profile.spans[i].end] == ')');
        }
        // Spans are disjoint and in bounds.
        for (std::size_t i = 1; i < profile.spans.size(); ++i) {
            CHECK(profile.spans[i - 1].end < profile.spans[i].start);
        }
        if (!profile.spans.empty()) CHECK(profile.spans.back().end < s.size());
    }
}

TEST_CASE("strip_paren_spans removes outermost spans") {
    CHECK(strip_paren_spans("a (b) c") == "a  c");
    CHECK(strip_paren_spans("a (b (c)) d") == "a  d");
    CHECK(strip_paren_spans("a ( b") == "a ( b");
    CHECK(strip_paren_spans("keep") == "keep");
}

TEST_CASE("final_punct_class watches : ! ? and ellipsis only") {
    CHECK(final_punct_class("Really?") == PunctClass::Question);
    CHECK(final_punct_class("Done.") == std::nullopt);
    CHECK(final_punct_class("wait... ") == PunctClass::Ellipsis);
    CHECK(final_punct_class("wait\xE2\x80\xA6") == PunctClass::Ellipsis);
    CHECK(final_punct_class("Stop!") == PunctClass::Exclaim);
    CHECK(final_punct_class("items:") == PunctClass::Colon);
    CHECK(final_punct_class("plain text") == std::nullopt);
    CHECK(final_punct_class("") == std::nullopt);
    CHECK(final_punct_class("   ") == std::nullopt);
}
