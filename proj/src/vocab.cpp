#include "cprep/vocab.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "cprep/corpus.hpp"
#include "cprep/error.hpp"
#include "cprep/utf8.hpp"

namespace cprep {

UnigramVocab::UnigramVocab(std::map<std::string, double> entries)
    : entries_(std::move(entries)) {
    for (const auto& [piece, logprob] : entries_) {
        if (piece.empty()) throw Error(ErrorCode::BadVocab, "empty piece");
        if (logprob > 0.0) {
            throw Error(ErrorCode::BadVocab, "positive log-probability for '" + piece + "'");
        }
        max_piece_cps_ = std::max(max_piece_cps_, utf8::count_codepoints(piece));
    }
}

UnigramVocab UnigramVocab::parse(std::string_view text) {
    std::map<std::string, double> entries;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        ++line_no;
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        const std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos || tab == 0) {
            throw Error(ErrorCode::BadVocab, "line " + std::to_string(line_no) +
                                                 ": expected piece<TAB>logprob");
        }
        const std::string_view piece = line.substr(0, tab);
        if (piece.find("\\t") != std::string_view::npos) {
            throw Error(ErrorCode::BadVocab,
                        "line " + std::to_string(line_no) + ": escaped tab in piece");
        }
        const std::string_view value = line.substr(tab + 1);
        double logprob = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), logprob);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            throw Error(ErrorCode::BadVocab,
                        "line " + std::to_string(line_no) + ": bad log-probability");
        }
        if (!entries.emplace(std::string(piece), logprob).second) {
            throw Error(ErrorCode::BadVocab,
                        "line " + std::to_string(line_no) + ": duplicate piece");
        }
    }
    return UnigramVocab(std::move(entries));
}

UnigramVocab UnigramVocab::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void UnigramVocab::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    for (const auto& [piece, logprob] : entries_) {
        out << piece << '\t' << format_score(logprob) << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

double UnigramVocab::min_logprob() const {
    double lo = 0.0;
    for (const auto& [piece, logprob] : entries_) lo = std::min(lo, logprob);
    return lo;
}

void MergeConfig::validate() const {
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidParams, "delta must be positive");
}

SegmentationResult viterbi_segment(std::string_view text, const UnigramVocab& vocab,
                                   double unk_logprob) {
    const std::u32string cps = utf8::decode(text);
    const std::size_t n = cps.size();
    const std::size_t max_len = std::max<std::size_t>(1, vocab.max_piece_codepoints());

    struct Cell {
        double score = -std::numeric_limits<double>::infinity();
        std::size_t pieces = 0;    // piece count of the best suffix cover
        std::size_t step = 0;      // length of the piece chosen at this cell
        bool known = false;
    };
    // dp[i]: best cover of the suffix starting at code point i.
    std::vector<Cell> dp(n + 1);
    dp[n] = {0.0, 0, 0, true};

    // Candidate order below matters: options are offered longest piece
    // first and the unknown fallback last, so on full ties the longest
    // (and known) choice stays, giving leftmost-longest overall.
    const auto better = [](const Cell& cand, const Cell& best) {
        if (best.step == 0) return true;  // nothing chosen yet
        if (cand.score != best.score) return cand.score > best.score;
        if (cand.pieces != best.pieces) return cand.pieces < best.pieces;
        return cand.step > best.step;
    };

    std::string piece_utf8;
    for (std::size_t i = n; i-- > 0;) {
        Cell best;
        const std::size_t limit = std::min(max_len, n - i);
        for (std::size_t len = limit; len >= 1; --len) {
            piece_utf8 = utf8::encode(std::u32string_view(cps).substr(i, len));
            const auto it = vocab.entries().find(piece_utf8);
            if (it == vocab.entries().end()) continue;
            const Cell cand{it->second + dp[i + len].score, dp[i + len].pieces + 1, len, true};
            if (better(cand, best)) best = cand;
        }
        const Cell unk{unk_logprob + dp[i + 1].score, dp[i + 1].pieces + 1, 1, false};
        if (better(unk, best)) best = unk;
        dp[i] = best;
    }

    SegmentationResult result;
    result.total_logprob = n == 0 ? 0.0 : dp[0].score;
    std::size_t pos = 0;
    while (pos < n) {
        const Cell& cell = dp[pos];
        SegmentPiece piece;
        piece.text = utf8::encode(std::u32string_view(cps).substr(pos, cell.step));
        piece.known = cell.known;
        if (!cell.known) result.contains_unknown = true;
        result.pieces.push_back(std::move(piece));
        pos += cell.step;
    }
    return result;
}

bool is_composable(std::string_view piece, const UnigramVocab& old_vocab) {
    const std::u32string cps = utf8::decode(piece);
    const std::size_t n = cps.size();
    if (n == 0) return false;
    const std::size_t max_len = std::max<std::size_t>(1, old_vocab.max_piece_codepoints());

    // prefix_ok[i]: cps[0,i) covered by >= 1 old pieces; suffix_ok[i]: cps[i,n).
    std::vector<char> prefix_ok(n + 1, 0);
    std::vector<char> suffix_ok(n + 1, 0);
    prefix_ok[0] = 1;
    suffix_ok[n] = 1;
    std::string utf8_piece;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t len = 1; len <= std::min(max_len, i); ++len) {
            if (!prefix_ok[i - len]) continue;
            utf8_piece = utf8::encode(std::u32string_view(cps).substr(i - len, len));
            if (old_vocab.contains(utf8_piece)) {
                prefix_ok[i] = 1;
                break;
            }
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t len = 1; len <= std::min(max_len, n - i); ++len) {
            if (!suffix_ok[i + len]) continue;
            utf8_piece = utf8::encode(std::u32string_view(cps).substr(i, len));
            if (old_vocab.contains(utf8_piece)) {
                suffix_ok[i] = 1;
                break;
            }
        }
    }
    for (std::size_t split = 1; split < n; ++split) {
        if (prefix_ok[split] && suffix_ok[split]) return true;
    }
    return false;
}

UnigramVocab merge_vocab(const UnigramVocab& old_vocab, const UnigramVocab& new_vocab,
                         const MergeConfig& cfg) {
    cfg.validate();
    std::map<std::string, double> merged = old_vocab.entries();
    const double new_logprob = old_vocab.min_logprob() - cfg.delta;
    for (const auto& [piece, logprob] : new_vocab.entries()) {
        if (merged.count(piece)) continue;  // old entries win collisions
        if (is_composable(piece, old_vocab)) continue;
        merged.emplace(piece, new_logprob);
    }
    return UnigramVocab(std::move(merged));
}

InvarianceReport verify_invariance(const std::function<bool(std::string&)>& next_line,
                                   const UnigramVocab& old_vocab, const UnigramVocab& merged,
                                   double unk_logprob) {
    InvarianceReport report;
    std::string line;
    while (next_line(line)) {
        const SegmentationResult with_old = viterbi_segment(line, old_vocab, unk_logprob);
        if (with_old.contains_unknown) {
            ++report.skipped;
            continue;
        }
        ++report.checked;
        const SegmentationResult with_merged = viterbi_segment(line, merged, unk_logprob);
        if (with_old.pieces != with_merged.pieces) {
            ++report.mismatches;
            if (report.examples.size() < 10) report.examples.push_back(line);
        }
    }
    return report;
}

InvarianceReport verify_invariance(const std::vector<std::string>& corpus,
                                   const UnigramVocab& old_vocab, const UnigramVocab& merged,
                                   double unk_logprob) {
    std::size_t index = 0;
    return verify_invariance(
        [&](std::string& line) {
            if (index >= corpus.size()) return false;
            line = corpus[index++];
            return true;
        },
        old_vocab, merged, unk_logprob);
}

}  // namespace cprep
