#include "cprep/mdl.hpp"

#include <cmath>
#include <random>
#include <set>

#include "doctest.h"

#include "cprep/error.hpp"
#include "cprep/utf8.hpp"

using namespace cprep;

namespace {

// Independent description-length oracle: naive string-based counting.
double oracle_objective(const std::vector<std::string>& entries, double codebook_weight) {
    std::set<std::string> distinct(entries.begin(), entries.end());
    double codebook = 0.0;
    for (const auto& w : distinct) codebook += static_cast<double>(utf8::count_codepoints(w));
    codebook *= codebook_weight;

    std::vector<std::string> seq;
    seq.push_back("\x01__start__");
    for (const auto& w : entries) seq.push_back(w);

    double encoding = 0.0;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        int bigram = 0;
        int context = 0;
        for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
            if (seq[j] == seq[i - 1] && seq[j + 1] == seq[i]) ++bigram;
        }
        for (const auto& w : seq) {
            if (w == seq[i - 1]) ++context;
        }
        encoding -= std::log2(static_cast<double>(bigram) / context);
    }
    return codebook + encoding;
}

// Exhaustive minimum over all segmentations, recomputed independently.
double oracle_min_bits(const std::string& ascii, double codebook_weight) {
    const std::size_t n = ascii.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<std::string> entries;
        std::size_t start = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (mask & (1u << i)) {
                entries.push_back(ascii.substr(start, i + 1 - start));
                start = i + 1;
            }
        }
        entries.push_back(ascii.substr(start));
        best = std::min(best, oracle_objective(entries, codebook_weight));
    }
    return best;
}

std::string repeat_token(const std::string& token, int times) {
    std::string out;
    for (int i = 0; i < times; ++i) {
        if (i) out.push_back(' ');
        out += token;
    }
    return out;
}

const MdlParams kDefaults{};

}  // namespace

TEST_CASE("objective evaluates the hand-computed cases") {
    const double quarters = 2.0 + 3.0 * -std::log2(3.0 / 4.0);  // 3.24511...
    CHECK(mdl_objective(Segmentation{{"a", "a", "a", "a"}}, kDefaults) ==
          doctest::Approx(quarters).epsilon(1e-12));
    CHECK(mdl_objective(Segmentation{{"aaaa"}}, kDefaults) == doctest::Approx(8.0));
    CHECK(mdl_objective(Segmentation{{"ab"}}, kDefaults) == doctest::Approx(4.0));
    CHECK_THROWS_AS(mdl_objective(Segmentation{{}}, kDefaults), Error);
}

TEST_CASE("objective matches the independent counting oracle on random segmentations") {
    std::mt19937_64 gen(42);
    std::uniform_int_distribution<int> ch(0, 2);
    std::uniform_int_distribution<int> len(1, 14);
    std::uniform_int_distribution<int> cut(0, 1);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = len(gen);
        std::string s;
        for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + ch(gen)));
        Segmentation seg;
        std::size_t start = 0;
        for (int i = 0; i + 1 < n; ++i) {
            if (cut(gen)) {
                seg.entries.push_back(s.substr(start, i + 1 - start));
                start = i + 1;
            }
        }
        seg.entries.push_back(s.substr(start));
        CHECK(mdl_objective(seg, kDefaults) ==
              doctest::Approx(oracle_objective(seg.entries, 2.0)).epsilon(1e-9));
    }
}

TEST_CASE("mdl_exact finds the enumerated global minimum") {
    const double quarters = 2.0 + 3.0 * -std::log2(3.0 / 4.0);
    const auto aaaa = mdl_exact("aaaa", kDefaults);
    CHECK(aaaa.bits == doctest::Approx(quarters).epsilon(1e-12));
    CHECK(aaaa.ratio == doctest::Approx(quarters / 4.0).epsilon(1e-12));
    CHECK(aaaa.noisy);
    CHECK(aaaa.segmentation.entries == std::vector<std::string>{"a", "a", "a", "a"});

    const auto ab = mdl_exact("ab", kDefaults);
    CHECK(ab.bits == doctest::Approx(4.0));
    CHECK(ab.ratio == doctest::Approx(2.0));
    CHECK_FALSE(ab.noisy);  // strict <
    // Tie at 4 bits resolves to fewer entries.
    CHECK(ab.segmentation.entries == std::vector<std::string>{"ab"});

    const auto a = mdl_exact("a", kDefaults);
    CHECK(a.bits == doctest::Approx(2.0));
    CHECK(a.ratio == doctest::Approx(2.0));
    CHECK_FALSE(a.noisy);

    CHECK_THROWS_AS(mdl_exact("aaaaaaaaaaaaaaaaa", kDefaults), Error);  // 17 cps
}

TEST_CASE("mdl_exact equals the independent enumeration oracle") {
    std::mt19937_64 gen(4242);
    std::uniform_int_distribution<int> ch(0, 2);
    std::uniform_int_distribution<int> len(1, 10);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = len(gen);
        std::string s;
        for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + ch(gen)));
        CHECK(mdl_exact(s, kDefaults).bits ==
              doctest::Approx(oracle_min_bits(s, 2.0)).epsilon(1e-9));
    }
}

TEST_CASE("heuristic never beats the exact minimum and usually matches") {
    std::mt19937_64 gen(777);
    std::uniform_int_distribution<int> ch(0, 2);
    std::uniform_int_distribution<int> len(1, 12);
    int agree = 0;
    const int trials = 500;
    for (int trial = 0; trial < trials; ++trial) {
        const int n = len(gen);
        std::string s;
        for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + ch(gen)));
        const auto heuristic = mdl_score(s, kDefaults);
        const auto exact = mdl_exact(s, kDefaults);
        CHECK(heuristic.bits >= exact.bits - 1e-9);
        if (heuristic.noisy == exact.noisy) {
            ++agree;
        } else {
            // The only allowed direction: heuristic says clean.
            CHECK_FALSE(heuristic.noisy);
            CHECK(exact.noisy);
        }
    }
    CHECK(agree >= trials * 9 / 10);
}

TEST_CASE("paper-style repeated patterns are noisy, plain text is not") {
    CHECK(is_noisy("mm mm mm MPEE(um) MPEP(um) mm mm mm mm mm mm kg kg", kDefaults));
    CHECK(is_noisy("Coaster Gift,Paper-Cut Coaster Zodiac,Red Coaster Cute,Paper-Cut Zodiac "
                   "Coaster",
                   kDefaults));
    CHECK_FALSE(is_noisy("The quick brown fox jumps over the lazy dog.", kDefaults));

    const auto plain = mdl_score("abcdef", kDefaults);
    CHECK(plain.ratio >= 2.0);
    CHECK_FALSE(plain.noisy);

    CHECK_THROWS_AS(mdl_score("", kDefaults), Error);
    CHECK_THROWS_AS(is_noisy("", kDefaults), Error);
}

TEST_CASE("duplicating a token never raises the ratio") {
    for (const std::string token : {"spam", "na", "buy now"}) {
        for (int k = 2; k + 1 <= 8; ++k) {
            const double r_k = mdl_score(repeat_token(token, k), kDefaults).ratio;
            const double r_k1 = mdl_score(repeat_token(token, k + 1), kDefaults).ratio;
            CHECK(r_k1 <= r_k + 1e-9);
        }
    }
}

TEST_CASE("mdl_score is deterministic") {
    const std::string sentence = "Coaster Gift,Paper-Cut Coaster Zodiac,Red Coaster Cute";
    const auto first = mdl_score(sentence, kDefaults);
    const auto second = mdl_score(sentence, kDefaults);
    CHECK(first.bits == second.bits);
    CHECK(first.segmentation.entries == second.segmentation.entries);
    CHECK(first.noisy == second.noisy);
}

TEST_CASE("segmentation entries concatenate to the sentence") {
    for (const std::string s : {"aaaa", "mm mm mm kg kg", "The quick brown fox."}) {
        const auto result = mdl_score(s, kDefaults);
        std::string joined;
        for (const auto& e : result.segmentation.entries) joined += e;
        CHECK(joined == s);
    }
}

TEST_CASE("mdl params validate") {
    MdlParams params;
    params.codebook_weight = 0.0;
    CHECK_THROWS_AS(params.validate(), Error);
    params = MdlParams{};
    params.noise_threshold = -1.0;
    CHECK_THROWS_AS(params.validate(), Error);
    params = MdlParams{};
    params.max_candidate_len = 0;
    CHECK_THROWS_AS(params.validate(), Error);
}
