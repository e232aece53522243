#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cprep {

struct MdlParams {
    double codebook_weight = 2.0;   // weight on total codebook length (C)
    double noise_threshold = 2.0;   // sentence is noisy when bits/len < T
    int max_candidate_len = 20;     // longest substring considered as an entry
    int min_candidate_count = 2;    // substring must occur at least this often
    int max_iterations = 10;        // hill-climb acceptance rounds

    void validate() const;
};

// A cover of the sentence by consecutive substrings ("coding entries");
// concatenating the entries reproduces the sentence exactly.
struct Segmentation {
    std::vector<std::string> entries;
};

struct MdlResult {
    double bits = 0.0;
    Segmentation segmentation;
    double ratio = 0.0;  // bits / length in code points
    bool noisy = false;
};

// Description length of one segmentation in bits: the codebook pays
// codebook_weight * |entry| once per distinct entry, and each token costs
// -log2 of its bigram probability #(prev,cur)/#prev over the token sequence
// (a start sentinel with count 1 precedes the first token, making the first
// transition free). Entry lengths count code points.
double mdl_objective(const std::vector<std::u32string_view>& entries, double codebook_weight);
double mdl_objective(const Segmentation& seg, const MdlParams& params);

// Global minimum over all 2^(n-1) segmentations; sentences longer than 16
// code points are rejected. Ties resolve to fewer entries, then the
// lexicographically smallest entry list.
MdlResult mdl_exact(std::string_view sentence, const MdlParams& params);

// Heuristic minimizer: starts from the single-character segmentation, then
// hill-climbs over an entry set. Candidates are the repeated substrings of
// the sentence (bounded length and count), the whitespace-run tokens, and
// the whole sentence; each round greedily re-segments (leftmost-longest,
// single characters as fallback) with one more candidate accepted and keeps
// the best strict improvement. The reported bits are always >= mdl_exact's.
MdlResult mdl_score(std::string_view sentence, const MdlParams& params);

bool is_noisy(std::string_view sentence, const MdlParams& params);

}  // namespace cprep
