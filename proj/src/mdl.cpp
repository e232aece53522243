#include "cprep/mdl.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "cprep/error.hpp"
#include "cprep/utf8.hpp"

namespace cprep {

namespace {

constexpr double kTieEps = 1e-9;

// The hill-climb only accepts a candidate that shrinks the objective by
// this fraction. Without it the climb nibbles natural text below the
// noise threshold through many near-worthless two-character merges;
// genuinely repetitive text clears the bar easily because its repeated
// chunks save double-digit percentages per step.
constexpr double kMinRelativeGain = 0.12;

struct ViewHash {
    std::size_t operator()(std::u32string_view v) const {
        std::size_t h = 1469598103934665603ULL;
        for (char32_t c : v) {
            h ^= static_cast<std::size_t>(c);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

// Token ids for the entry sequence; id 0 is the start sentinel.
std::vector<int> assign_ids(const std::vector<std::u32string_view>& entries,
                            std::vector<std::size_t>& distinct_len_out) {
    std::unordered_map<std::u32string_view, int, ViewHash> ids;
    ids.reserve(entries.size() * 2);
    std::vector<int> seq;
    seq.reserve(entries.size() + 1);
    seq.push_back(0);
    distinct_len_out.clear();
    for (const auto& e : entries) {
        auto [it, inserted] = ids.try_emplace(e, static_cast<int>(ids.size()) + 1);
        if (inserted) distinct_len_out.push_back(e.size());
        seq.push_back(it->second);
    }
    return seq;
}

}  // namespace

void MdlParams::validate() const {
    if (codebook_weight <= 0 || noise_threshold <= 0 || max_candidate_len < 1 ||
        min_candidate_count < 1 || max_iterations < 1) {
        throw Error(ErrorCode::InvalidParams, "mdl parameters out of range");
    }
}

double mdl_objective(const std::vector<std::u32string_view>& entries, double codebook_weight) {
    if (entries.empty()) throw Error(ErrorCode::EmptySegmentation, "no entries");

    std::vector<std::size_t> distinct_lens;
    const std::vector<int> seq = assign_ids(entries, distinct_lens);

    double codebook = 0.0;
    for (std::size_t len : distinct_lens) codebook += static_cast<double>(len);
    codebook *= codebook_weight;

    // Token and bigram counts over the whole sequence (sentinel included).
    std::vector<int> token_count(distinct_lens.size() + 1, 0);
    for (int id : seq) ++token_count[id];
    std::unordered_map<std::uint64_t, int> bigram_count;
    bigram_count.reserve(seq.size() * 2);
    for (std::size_t i = 1; i < seq.size(); ++i) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(seq[i - 1]) << 32) | static_cast<std::uint32_t>(seq[i]);
        ++bigram_count[key];
    }

    double encoding = 0.0;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(seq[i - 1]) << 32) | static_cast<std::uint32_t>(seq[i]);
        const double p = static_cast<double>(bigram_count[key]) /
                         static_cast<double>(token_count[seq[i - 1]]);
        encoding -= std::log2(p);
    }
    return codebook + encoding;
}

double mdl_objective(const Segmentation& seg, const MdlParams& params) {
    params.validate();
    std::vector<std::u32string> storage;
    storage.reserve(seg.entries.size());
    for (const auto& e : seg.entries) storage.push_back(utf8::decode(e));
    std::vector<std::u32string_view> views(storage.begin(), storage.end());
    return mdl_objective(views, params.codebook_weight);
}

namespace {

std::vector<std::u32string_view> views_from_cuts(const std::u32string& s,
                                                 const std::vector<std::size_t>& cuts) {
    // cuts are the entry end positions, last one == s.size().
    std::vector<std::u32string_view> views;
    views.reserve(cuts.size());
    std::size_t start = 0;
    for (std::size_t end : cuts) {
        views.push_back(std::u32string_view(s).substr(start, end - start));
        start = end;
    }
    return views;
}

Segmentation to_segmentation(const std::vector<std::u32string_view>& views) {
    Segmentation seg;
    seg.entries.reserve(views.size());
    for (const auto& v : views) seg.entries.push_back(utf8::encode(v));
    return seg;
}

MdlResult make_result(double bits, const std::vector<std::u32string_view>& views,
                      std::size_t sentence_len, const MdlParams& params) {
    MdlResult result;
    result.bits = bits;
    result.segmentation = to_segmentation(views);
    result.ratio = bits / static_cast<double>(sentence_len);
    result.noisy = result.ratio < params.noise_threshold;
    return result;
}

// true when `a` beats `b` under (fewer entries, then lexicographic entries).
bool exact_tie_better(const std::vector<std::u32string_view>& a,
                      const std::vector<std::u32string_view>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

MdlResult mdl_exact(std::string_view sentence, const MdlParams& params) {
    params.validate();
    const std::u32string s = utf8::decode(sentence);
    if (s.empty()) throw Error(ErrorCode::EmptySentence, "sentence is empty");
    if (s.size() > 16) {
        throw Error(ErrorCode::TooLongForExact,
                    std::to_string(s.size()) + " code points (limit 16)");
    }

    const std::size_t n = s.size();
    double best_bits = 0.0;
    std::vector<std::u32string_view> best_views;
    std::vector<std::size_t> cuts;
    const std::uint32_t num_masks = n >= 1 ? (1u << (n - 1)) : 1;
    for (std::uint32_t mask = 0; mask < num_masks; ++mask) {
        cuts.clear();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (mask & (1u << i)) cuts.push_back(i + 1);
        }
        cuts.push_back(n);
        const auto views = views_from_cuts(s, cuts);
        const double bits = mdl_objective(views, params.codebook_weight);
        if (best_views.empty() || bits < best_bits - kTieEps ||
            (bits <= best_bits + kTieEps && exact_tie_better(views, best_views))) {
            best_bits = std::min(bits, best_views.empty() ? bits : best_bits);
            best_views = views;
        }
    }
    return make_result(best_bits, best_views, n, params);
}

namespace {

// Greedy leftmost-longest cover with the accepted entry set; single code
// points are the fallback.
std::vector<std::u32string_view> greedy_cover(const std::u32string& s,
                                              const std::vector<std::u32string_view>& entry_set) {
    // Entries sorted by descending length for the longest-match scan.
    std::vector<std::u32string_view> sorted = entry_set;
    std::sort(sorted.begin(), sorted.end(),
              [](std::u32string_view a, std::u32string_view b) { return a.size() > b.size(); });

    std::vector<std::u32string_view> cover;
    const std::u32string_view sv(s);
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::u32string_view chosen = sv.substr(pos, 1);
        for (const auto& e : sorted) {
            if (e.size() > 1 && e.size() <= s.size() - pos && sv.substr(pos, e.size()) == e) {
                chosen = e;
                break;
            }
        }
        cover.push_back(chosen);
        pos += chosen.size();
    }
    return cover;
}

// true when `a` beats `b` under (fewer entries, then leftmost-longest,
// then lexicographic as a total order).
bool heuristic_tie_better(const std::vector<std::u32string_view>& a,
                          const std::vector<std::u32string_view>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return a[i].size() > b[i].size();
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

struct BestTracker {
    double bits = 0.0;
    std::vector<std::u32string_view> views;

    bool offer(double candidate_bits, const std::vector<std::u32string_view>& candidate) {
        if (views.empty() || candidate_bits < bits - kTieEps) {
            bits = candidate_bits;
            views = candidate;
            return true;
        }
        if (candidate_bits <= bits + kTieEps && heuristic_tie_better(candidate, views)) {
            views = candidate;
            return true;
        }
        return false;
    }
};

}  // namespace

MdlResult mdl_score(std::string_view sentence, const MdlParams& params) {
    params.validate();
    const std::u32string s = utf8::decode(sentence);
    if (s.empty()) throw Error(ErrorCode::EmptySentence, "sentence is empty");
    const std::size_t n = s.size();
    const std::u32string_view sv(s);

    // Candidate entries: repeated substrings (overlaps count), whitespace-run
    // tokens, and the whole sentence.
    std::set<std::u32string_view> candidate_set;
    const std::size_t max_len = std::min<std::size_t>(params.max_candidate_len, n);
    for (std::size_t len = 2; len <= max_len; ++len) {
        std::unordered_map<std::u32string_view, int, ViewHash> counts;
        counts.reserve(n * 2);
        for (std::size_t i = 0; i + len <= n; ++i) {
            ++counts[sv.substr(i, len)];
        }
        for (const auto& [sub, count] : counts) {
            if (count >= params.min_candidate_count) candidate_set.insert(sub);
        }
    }
    // Whitespace-run tokens and the whole sentence seed the candidate pool.
    {
        std::size_t start = 0;
        while (start < n) {
            const bool in_space = s[start] == U' ';
            std::size_t end = start;
            while (end < n && (s[end] == U' ') == in_space) ++end;
            if (end - start > 1) candidate_set.insert(sv.substr(start, end - start));
            start = end;
        }
    }
    if (n > 1) candidate_set.insert(sv);
    const std::vector<std::u32string_view> candidates(candidate_set.begin(), candidate_set.end());

    BestTracker best;

    // Hill-climb from the character-level cover.
    std::vector<std::u32string_view> accepted;
    auto cover = greedy_cover(s, accepted);
    double current_bits = mdl_objective(cover, params.codebook_weight);
    best.offer(current_bits, cover);

    for (int iter = 0; iter < params.max_iterations; ++iter) {
        const double acceptance_bar = current_bits * (1.0 - kMinRelativeGain);
        double round_bits = acceptance_bar;
        std::vector<std::u32string_view> round_views;
        std::u32string_view round_candidate;
        std::vector<std::u32string_view> trial = accepted;
        trial.push_back({});
        for (const auto& candidate : candidates) {
            if (std::find(accepted.begin(), accepted.end(), candidate) != accepted.end()) continue;
            trial.back() = candidate;
            const auto trial_cover = greedy_cover(s, trial);
            const double bits = mdl_objective(trial_cover, params.codebook_weight);
            if (bits < round_bits - kTieEps ||
                (!round_views.empty() && bits <= round_bits + kTieEps &&
                 heuristic_tie_better(trial_cover, round_views))) {
                round_bits = std::min(bits, round_bits);
                round_views = trial_cover;
                round_candidate = candidate;
            }
        }
        if (round_views.empty()) break;  // nothing cleared the acceptance bar
        accepted.push_back(round_candidate);
        current_bits = round_bits;
        best.offer(round_bits, round_views);
    }

    return make_result(best.bits, best.views, n, params);
}

bool is_noisy(std::string_view sentence, const MdlParams& params) {
    return mdl_score(sentence, params).noisy;
}

}  // namespace cprep
