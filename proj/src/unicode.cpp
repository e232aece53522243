#include "cprep/unicode.hpp"

#include <algorithm>

#include "unicode_tables.hpp"

namespace cprep::uni {

namespace {

constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulLCount = 19;
constexpr int kHangulVCount = 21;
constexpr int kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

const CanonicalDecomp* find_decomp(char32_t cp) {
    const auto* end = kCanonicalDecomps + kNumCanonicalDecomps;
    const auto* it = std::lower_bound(kCanonicalDecomps, end, cp,
                                      [](const CanonicalDecomp& d, char32_t c) { return d.cp < c; });
    return (it != end && it->cp == cp) ? it : nullptr;
}

}  // namespace

bool is_combining_mark(char32_t cp) {
    const auto* end = kMarkRanges + kNumMarkRanges;
    const auto* it = std::upper_bound(kMarkRanges, end, cp,
                                      [](char32_t c, const CpRange& r) { return c < r.lo; });
    return it != kMarkRanges && cp <= (it - 1)->hi;
}

void decompose_canonical(char32_t cp, std::u32string& out) {
    if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
        const int index = static_cast<int>(cp - kHangulSBase);
        out.push_back(kHangulLBase + index / kHangulNCount);
        out.push_back(kHangulVBase + (index % kHangulNCount) / kHangulTCount);
        if (index % kHangulTCount != 0) out.push_back(kHangulTBase + index % kHangulTCount);
        return;
    }
    if (const auto* d = find_decomp(cp)) {
        decompose_canonical(d->first, out);
        if (d->second != 0) decompose_canonical(d->second, out);
        return;
    }
    out.push_back(cp);
}

void compose_starters(std::u32string& cps) {
    std::u32string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (!out.empty()) {
            const char32_t prev = out.back();
            if (prev >= kHangulLBase && prev < kHangulLBase + kHangulLCount && cp >= kHangulVBase &&
                cp < kHangulVBase + kHangulVCount) {
                const int l = static_cast<int>(prev - kHangulLBase);
                const int v = static_cast<int>(cp - kHangulVBase);
                out.back() = kHangulSBase + (l * kHangulVCount + v) * kHangulTCount;
                continue;
            }
            if (prev >= kHangulSBase && prev < kHangulSBase + kHangulSCount &&
                (prev - kHangulSBase) % kHangulTCount == 0 && cp > kHangulTBase &&
                cp < kHangulTBase + kHangulTCount) {
                out.back() = prev + (cp - kHangulTBase);
                continue;
            }
        }
        out.push_back(cp);
    }
    cps.swap(out);
}

bool fold_digit(char32_t cp, std::string& out) {
    const auto* end = kDigitFolds + kNumDigitFolds;
    const auto* it = std::lower_bound(kDigitFolds, end, cp,
                                      [](const DigitFold& d, char32_t c) { return d.cp < c; });
    if (it == end || it->cp != cp) return false;
    out.push_back(it->first);
    if (it->second != '\0') out.push_back(it->second);
    return true;
}

}  // namespace cprep::uni
