#include "cprep/vocab.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"

#include "cprep/error.hpp"

using namespace cprep;

namespace {

UnigramVocab vocab(std::map<std::string, double> entries) {
    return UnigramVocab(std::move(entries));
}

std::vector<std::string> piece_texts(const SegmentationResult& result) {
    std::vector<std::string> out;
    for (const auto& piece : result.pieces) out.push_back(piece.text);
    return out;
}

// Direct DP reachability oracle over byte positions (ASCII test pieces).
bool oracle_composable(const std::string& piece, const std::vector<std::string>& old_pieces) {
    const std::size_t n = piece.size();
    // ways[i] = set of part counts that can cover piece[0, i)
    std::vector<std::set<int>> ways(n + 1);
    ways[0].insert(0);
    for (std::size_t i = 1; i <= n; ++i) {
        for (const auto& p : old_pieces) {
            if (p.size() <= i && piece.compare(i - p.size(), p.size(), p) == 0) {
                for (int c : ways[i - p.size()]) ways[i].insert(c + 1);
            }
        }
    }
    for (int c : ways[n]) {
        if (c >= 2) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("viterbi picks the maximum-logprob cover") {
    const auto v = vocab({{"a", -1.0}, {"b", -1.0}, {"ab", -1.5}});
    const auto ab = viterbi_segment("ab", v, -20.0);
    CHECK(piece_texts(ab) == std::vector<std::string>{"ab"});
    CHECK(ab.total_logprob == doctest::Approx(-1.5));
    CHECK_FALSE(ab.contains_unknown);

    const auto ba = viterbi_segment("ba", v, -20.0);
    CHECK(piece_texts(ba) == std::vector<std::string>{"b", "a"});

    const auto ax = viterbi_segment("ax", vocab({{"a", -1.0}}), -20.0);
    REQUIRE(piece_texts(ax) == std::vector<std::string>{"a", "x"});
    CHECK(ax.contains_unknown);
    CHECK_FALSE(ax.pieces[0].known == false);
    CHECK(ax.pieces[1].known == false);
    CHECK(ax.total_logprob == doctest::Approx(-21.0));
}

TEST_CASE("viterbi ties resolve to fewer pieces then leftmost-longest") {
    // -2 total either way; the single piece wins.
    const auto v = vocab({{"a", -1.0}, {"b", -1.0}, {"ab", -2.0}});
    CHECK(piece_texts(viterbi_segment("ab", v, -20.0)) == std::vector<std::string>{"ab"});

    // Same score, same piece count: the longer first piece wins.
    const auto w = vocab({{"ab", -1.0}, {"a", -1.0}, {"bc", -1.0}, {"c", -1.0}});
    CHECK(piece_texts(viterbi_segment("abc", w, -20.0)) == std::vector<std::string>{"ab", "c"});
}

TEST_CASE("viterbi concatenation reproduces the input") {
    const auto v = vocab({{"ab", -1.0}, {"cd", -1.2}, {"abc", -2.0}});
    for (const std::string text : {"abcd", "abxcd", "zzz", "abcabc"}) {
        const auto result = viterbi_segment(text, v, -20.0);
        std::string joined;
        for (const auto& piece : result.pieces) joined += piece.text;
        CHECK(joined == text);
    }
}

TEST_CASE("is_composable needs at least two old pieces") {
    const auto ab_vocab = vocab({{"a", -1.0}, {"b", -1.0}});
    CHECK(is_composable("ab", ab_vocab));
    CHECK_FALSE(is_composable("ab", vocab({{"ab", -1.0}})));  // itself does not count
    const auto mixed = vocab({{"a", -1.0}, {"bc", -1.0}});
    CHECK(is_composable("abc", mixed));
    CHECK_FALSE(is_composable("acb", mixed));
    CHECK_FALSE(is_composable("a", ab_vocab));
    // An old piece plus itself counts (>= 2 parts).
    CHECK(is_composable("aa", ab_vocab));
}

TEST_CASE("is_composable matches the DP oracle on random pieces") {
    std::mt19937_64 gen(2024);
    const std::vector<std::string> old_pieces = {"a", "bc", "cab", "bb", "cc"};
    std::map<std::string, double> entries;
    for (const auto& p : old_pieces) entries[p] = -1.0;
    const auto old_vocab = vocab(entries);

    std::uniform_int_distribution<int> ch(0, 2);
    std::uniform_int_distribution<int> len(1, 10);
    for (int trial = 0; trial < 1'000; ++trial) {
        std::string piece;
        const int n = len(gen);
        for (int i = 0; i < n; ++i) piece.push_back(static_cast<char>('a' + ch(gen)));
        CHECK(is_composable(piece, old_vocab) == oracle_composable(piece, old_pieces));
    }
}

TEST_CASE("merge keeps old entries, removes composables, penalizes the rest") {
    const auto old_vocab = vocab({{"a", -1.0}, {"b", -1.2}});
    const auto new_vocab = vocab({{"ab", -0.5}, {"c", -0.7}});
    const auto merged = merge_vocab(old_vocab, new_vocab, MergeConfig{});

    REQUIRE(merged.size() == 3);
    CHECK(merged.entries().at("a") == -1.0);
    CHECK(merged.entries().at("b") == -1.2);
    CHECK(merged.entries().at("c") == doctest::Approx(-11.2));
    CHECK_FALSE(merged.contains("ab"));  // composable from a + b

    // Empty new vocabulary: merge is the identity.
    const auto same = merge_vocab(old_vocab, UnigramVocab(), MergeConfig{});
    CHECK(same.entries() == old_vocab.entries());

    // Shared pieces keep the old log-probability.
    const auto shared = merge_vocab(old_vocab, vocab({{"a", -0.1}}), MergeConfig{});
    CHECK(shared.entries().at("a") == -1.0);

    MergeConfig bad;
    bad.delta = 0.0;
    CHECK_THROWS_AS(merge_vocab(old_vocab, new_vocab, bad), Error);
}

TEST_CASE("merged vocab preserves old segmentations and covers new text") {
    const auto old_vocab = vocab({{"a", -1.0}, {"b", -1.2}, {"ab", -1.9}, {"ba", -2.4}});
    const auto new_vocab = vocab({{"q", -0.5}, {"qa", -0.8}, {"aba", -0.3}});
    const auto merged = merge_vocab(old_vocab, new_vocab, MergeConfig{});

    std::mt19937_64 gen(9);
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<int> parts(1, 8);
    const std::vector<std::string> old_piece_list = {"a", "b", "ab", "ba"};
    std::vector<std::string> corpus;
    for (int i = 0; i < 500; ++i) {
        std::string line;
        const int n = parts(gen);
        for (int j = 0; j < n; ++j) line += old_piece_list[pick(gen)];
        corpus.push_back(line);
    }
    const auto report = verify_invariance(corpus, old_vocab, merged, -20.0);
    CHECK(report.checked == corpus.size());
    CHECK(report.mismatches == 0);

    // New-language text segments without unknowns after the merge.
    const auto result = viterbi_segment("qaq", merged, -20.0);
    CHECK_FALSE(result.contains_unknown);

    // Identical vocabularies never mismatch; empty corpora check nothing.
    const auto self_report = verify_invariance(corpus, old_vocab, old_vocab, -20.0);
    CHECK(self_report.mismatches == 0);
    const auto empty = verify_invariance(std::vector<std::string>{}, old_vocab, merged, -20.0);
    CHECK(empty.checked == 0);
    CHECK(empty.mismatches == 0);
}

TEST_CASE("verify_invariance skips lines the old vocab cannot cover") {
    const auto old_vocab = vocab({{"a", -1.0}});
    const auto merged = merge_vocab(old_vocab, vocab({{"z", -1.0}}), MergeConfig{});
    const auto report = verify_invariance(std::vector<std::string>{"aaa", "az", "zzz"}, old_vocab,
                                          merged, -20.0);
    CHECK(report.checked == 1);
    CHECK(report.skipped == 2);
    CHECK(report.mismatches == 0);
}

TEST_CASE("vocab files parse and reject escaped tabs") {
    const auto parsed = UnigramVocab::parse("hello\t-1.5\nwor\xC3\xA9ld\t-2.25\n");
    CHECK(parsed.size() == 2);
    CHECK(parsed.entries().at("hello") == -1.5);

    CHECK_THROWS_AS(UnigramVocab::parse("piece-without-value\n"), Error);
    CHECK_THROWS_AS(UnigramVocab::parse("p\tnot-a-number\n"), Error);
    CHECK_THROWS_AS(UnigramVocab::parse("dup\t-1\ndup\t-2\n"), Error);
    CHECK_THROWS_AS(UnigramVocab::parse("bad\\tpiece\t-1\n"), Error);
    CHECK_THROWS_AS(UnigramVocab::parse("up\t1.5\n"), Error);  // positive logprob

    const auto dir = std::filesystem::temp_directory_path() / "cprep_vocab_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "v.vocab").string();
    parsed.save_file(path);
    const auto loaded = UnigramVocab::load_file(path);
    CHECK(loaded.entries() == parsed.entries());
    std::filesystem::remove_all(dir);
}
