#pragma once

#include <string>
#include <string_view>

namespace cprep::uni {

bool is_combining_mark(char32_t cp);

// Recursive canonical decomposition of one code point (Hangul handled
// algorithmically), appended to `out`.
void decompose_canonical(char32_t cp, std::u32string& out);

// Canonical composition pass over a mark-free sequence. With marks already
// removed, only Hangul jamo can recompose (verified when the data tables
// are generated).
void compose_starters(std::u32string& cps);

// Maps code points whose NFKC form is a short ASCII digit string to those
// digits; returns false when `cp` has no such fold.
bool fold_digit(char32_t cp, std::string& out);

}  // namespace cprep::uni
