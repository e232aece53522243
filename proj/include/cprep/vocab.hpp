#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cprep {

// Unigram subword vocabulary: piece -> log-probability. File format is
// one "piece<TAB>logprob" per line, UTF-8; literal "\t" escapes in pieces
// are rejected.
class UnigramVocab {
  public:
    UnigramVocab() = default;
    explicit UnigramVocab(std::map<std::string, double> entries);

    static UnigramVocab load_file(const std::string& path);
    void save_file(const std::string& path) const;
    static UnigramVocab parse(std::string_view text);

    const std::map<std::string, double>& entries() const { return entries_; }
    bool contains(std::string_view piece) const { return entries_.count(std::string(piece)) > 0; }
    std::size_t size() const { return entries_.size(); }
    std::size_t max_piece_codepoints() const { return max_piece_cps_; }
    double min_logprob() const;

  private:
    std::map<std::string, double> entries_;
    std::size_t max_piece_cps_ = 0;
};

struct MergeConfig {
    double delta = 10.0;         // log-space penalty below the old minimum
    double unk_logprob = -20.0;  // per-character fallback cost

    void validate() const;
};

struct SegmentPiece {
    std::string text;
    bool known = true;  // false for per-character unknown fallback
    bool operator==(const SegmentPiece&) const = default;
};

struct SegmentationResult {
    std::vector<SegmentPiece> pieces;
    double total_logprob = 0.0;
    bool contains_unknown = false;
};

// Maximum-logprob cover of the text by vocabulary pieces with per-character
// unknown fallback. Ties resolve to fewer pieces, then leftmost-longest.
SegmentationResult viterbi_segment(std::string_view text, const UnigramVocab& vocab,
                                   double unk_logprob);

// Whether `piece` concatenates from >= 2 old pieces (the piece itself being
// an old piece does not count).
bool is_composable(std::string_view piece, const UnigramVocab& old_vocab);

// Adds the new pieces that are neither old nor composable from old pieces,
// at logprob (old minimum - delta); old entries pass through untouched and
// win name collisions. Keeps the old-language segmentation intact.
UnigramVocab merge_vocab(const UnigramVocab& old_vocab, const UnigramVocab& new_vocab,
                         const MergeConfig& cfg);

struct InvarianceReport {
    std::size_t checked = 0;
    std::size_t skipped = 0;  // lines the old vocab cannot segment without unknowns
    std::size_t mismatches = 0;
    std::vector<std::string> examples;  // up to 10 mismatching lines
};

// Counts corpus lines whose segmentation changes between the old and the
// merged vocabulary.
InvarianceReport verify_invariance(const std::function<bool(std::string&)>& next_line,
                                   const UnigramVocab& old_vocab, const UnigramVocab& merged,
                                   double unk_logprob);
InvarianceReport verify_invariance(const std::vector<std::string>& corpus,
                                   const UnigramVocab& old_vocab, const UnigramVocab& merged,
                                   double unk_logprob);

}  // namespace cprep
