// Declarations for the generated Unicode data tables (see
// tools/gen_unicode_tables.py).
#pragma once

#include <cstddef>
#include <cstdint>

namespace cprep::uni {

struct CanonicalDecomp {
    char32_t cp;
    char32_t first;
    char32_t second;  // 0 when the decomposition is a single code point
};

struct CpRange {
    char32_t lo;
    char32_t hi;  // inclusive
};

struct DigitFold {
    char32_t cp;
    char first;
    char second;  // '\0' when the fold is a single digit
};

extern const CanonicalDecomp kCanonicalDecomps[];
extern const std::size_t kNumCanonicalDecomps;

extern const CpRange kMarkRanges[];
extern const std::size_t kNumMarkRanges;

extern const DigitFold kDigitFolds[];
extern const std::size_t kNumDigitFolds;

}  // namespace cprep::uni
