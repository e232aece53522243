#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cprep::utf8 {

// Decodes UTF-8; invalid byte sequences become U+FFFD (one replacement
// per offending byte).
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view cps);
void append(std::string& out, char32_t cp);

bool is_valid(std::string_view text);

// Number of code points, counting each invalid byte as one.
std::size_t count_codepoints(std::string_view text);

}  // namespace cprep::utf8
