#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cprep {

// Removes diacritics: canonical decomposition, drop all combining marks,
// recompose. Idempotent; never emits a combining mark.
std::string strip_diacritics(std::string_view text);

// Maximal runs of ASCII digits as a multiset (token -> multiplicity).
// Non-ASCII digits with an ASCII NFKC fold (fullwidth, superscripts, ...)
// are folded first.
std::map<std::string, int> extract_numbers(std::string_view text);

struct ParenSpan {
    std::size_t start;  // byte offset of '('
    std::size_t end;    // byte offset of the matching ')'
};

struct ParenProfile {
    int open_count = 0;
    int close_count = 0;
    std::vector<ParenSpan> spans;  // outermost balanced spans only
};

// Counts parentheses and records outermost balanced spans found by one
// left-to-right matching pass; unbalanced parens count but produce no span.
ParenProfile paren_profile(std::string_view text);

// Removes the balanced spans reported by paren_profile from the text.
std::string strip_paren_spans(std::string_view text);

enum class PunctClass { Colon, Exclaim, Question, Ellipsis };

// Classifies the final non-whitespace character when it is one of the
// watched marks {: ! ? ...}; "..." and U+2026 map to the same class.
// A plain '.' is not watched.
std::optional<PunctClass> final_punct_class(std::string_view text);

}  // namespace cprep
