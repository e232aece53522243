#include "cprep/textnorm.hpp"

#include "cprep/unicode.hpp"
#include "cprep/utf8.hpp"

namespace cprep {

std::string strip_diacritics(std::string_view text) {
    const std::u32string cps = utf8::decode(text);
    std::u32string decomposed;
    decomposed.reserve(cps.size());
    std::u32string tmp;
    for (char32_t cp : cps) {
        tmp.clear();
        uni::decompose_canonical(cp, tmp);
        for (char32_t d : tmp) {
            if (!uni::is_combining_mark(d)) decomposed.push_back(d);
        }
    }
    uni::compose_starters(decomposed);
    return utf8::encode(decomposed);
}

std::map<std::string, int> extract_numbers(std::string_view text) {
    // Fold Unicode digits to ASCII, then scan for maximal ASCII digit runs.
    std::string folded;
    folded.reserve(text.size());
    const std::u32string cps = utf8::decode(text);
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            folded.push_back(static_cast<char>(cp));
        } else if (!uni::fold_digit(cp, folded)) {
            folded.push_back('\x01');  // placeholder: breaks digit runs
        }
    }

    std::map<std::string, int> numbers;
    std::size_t i = 0;
    while (i < folded.size()) {
        if (folded[i] >= '0' && folded[i] <= '9') {
            std::size_t j = i;
            while (j < folded.size() && folded[j] >= '0' && folded[j] <= '9') ++j;
            ++numbers[folded.substr(i, j - i)];
            i = j;
        } else {
            ++i;
        }
    }
    return numbers;
}

ParenProfile paren_profile(std::string_view text) {
    ParenProfile profile;
    std::vector<std::size_t> open_stack;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') {
            ++profile.open_count;
            open_stack.push_back(i);
        } else if (text[i] == ')') {
            ++profile.close_count;
            if (!open_stack.empty()) {
                const std::size_t start = open_stack.back();
                open_stack.pop_back();
                // A completed span subsumes any previously recorded spans
                // nested inside it, keeping only outermost ones.
                while (!profile.spans.empty() && profile.spans.back().start > start) {
                    profile.spans.pop_back();
                }
                profile.spans.push_back({start, i});
            }
        }
    }
    return profile;
}

std::string strip_paren_spans(std::string_view text) {
    const ParenProfile profile = paren_profile(text);
    if (profile.spans.empty()) return std::string(text);
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    for (const ParenSpan& span : profile.spans) {
        out.append(text.substr(pos, span.start - pos));
        pos = span.end + 1;
    }
    out.append(text.substr(pos));
    return out;
}

std::optional<PunctClass> final_punct_class(std::string_view text) {
    std::size_t end = text.size();
    while (end > 0) {
        const char c = text[end - 1];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            --end;
        } else {
            break;
        }
    }
    if (end == 0) return std::nullopt;
    const std::string_view trimmed = text.substr(0, end);
    if (trimmed.size() >= 3 && trimmed.substr(end - 3) == "...") return PunctClass::Ellipsis;
    if (trimmed.size() >= 3 && trimmed.substr(end - 3) == "\xE2\x80\xA6") return PunctClass::Ellipsis;
    switch (trimmed.back()) {
        case ':': return PunctClass::Colon;
        case '!': return PunctClass::Exclaim;
        case '?': return PunctClass::Question;
        default: return std::nullopt;
    }
}

}  // namespace cprep
