#!/usr/bin/env python3
"""Regenerates src/unicode_tables.cpp from Python's unicodedata.

The C++ code needs three pieces of Unicode data:
  1. canonical decomposition mappings (non-recursive, Hangul excluded --
     Hangul decomposition/composition is algorithmic at runtime),
  2. code-point ranges of combining marks (general categories Mn, Mc, Me),
  3. mappings of code points whose NFKC form is a short ASCII digit string
     (fullwidth digits, superscripts, circled numbers, ...).

It also verifies an assumption the runtime relies on: after removing all
combining marks, the only canonical compositions left to apply are the
algorithmic Hangul ones.  Any non-mark, non-Hangul composition pair would
need an extra table; the script fails loudly if one exists.

Usage: python3 tools/gen_unicode_tables.py > src/unicode_tables.cpp
"""

import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_S_BASE, HANGUL_S_COUNT = 0xAC00, 11172


def is_hangul_syllable(cp):
    return HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT


def canonical_decompositions():
    out = []
    for cp in range(MAX_CP):
        if is_hangul_syllable(cp):
            continue
        d = unicodedata.decomposition(chr(cp))
        if not d or d.startswith("<"):
            continue
        parts = [int(x, 16) for x in d.split()]
        assert 1 <= len(parts) <= 2, hex(cp)
        out.append((cp, parts))
    return out


def mark_ranges():
    ranges = []
    start = None
    for cp in range(MAX_CP + 1):
        mark = cp < MAX_CP and unicodedata.category(chr(cp)) in ("Mn", "Mc", "Me")
        if mark and start is None:
            start = cp
        elif not mark and start is not None:
            ranges.append((start, cp - 1))
            start = None
    return ranges


def digit_folds():
    out = []
    for cp in range(MAX_CP):
        if cp < 0x80:
            continue
        folded = unicodedata.normalize("NFKC", chr(cp))
        if folded and all("0" <= c <= "9" for c in folded):
            assert len(folded) <= 2, hex(cp)
            out.append((cp, folded))
    return out


def check_composition_assumption(decomps):
    # A starter composes with a following char during NFC only if some code
    # point canonically decomposes into that pair (and is not excluded).
    bad = []
    for cp, parts in decomps:
        if len(parts) != 2:
            continue
        recomposed = unicodedata.normalize("NFC", unicodedata.normalize("NFD", chr(cp)))
        if recomposed != chr(cp):
            continue  # composition-excluded
        second = chr(parts[1])
        if unicodedata.category(second) not in ("Mn", "Mc", "Me"):
            bad.append((cp, parts))
    if bad:
        for cp, parts in bad[:20]:
            print(f"non-mark composition pair: {hex(cp)} <- {parts}", file=sys.stderr)
        sys.exit("composition assumption violated; runtime needs a pair table")


def main():
    decomps = canonical_decompositions()
    marks = mark_ranges()
    folds = digit_folds()
    check_composition_assumption(decomps)

    w = sys.stdout.write
    w("// Generated by tools/gen_unicode_tables.py -- do not edit.\n")
    w(f"// Unicode data version: {unicodedata.unidata_version}\n\n")
    w('#include "unicode_tables.hpp"\n\n')
    w("namespace cprep::uni {\n\n")

    w("const CanonicalDecomp kCanonicalDecomps[] = {\n")
    for cp, parts in decomps:
        b = parts[1] if len(parts) == 2 else 0
        w(f"    {{0x{cp:X}, 0x{parts[0]:X}, 0x{b:X}}},\n")
    w("};\n")
    w(f"const std::size_t kNumCanonicalDecomps = {len(decomps)};\n\n")

    w("const CpRange kMarkRanges[] = {\n")
    for lo, hi in marks:
        w(f"    {{0x{lo:X}, 0x{hi:X}}},\n")
    w("};\n")
    w(f"const std::size_t kNumMarkRanges = {len(marks)};\n\n")

    w("const DigitFold kDigitFolds[] = {\n")
    for cp, folded in folds:
        b = folded[1] if len(folded) == 2 else "\\0"
        w(f"    {{0x{cp:X}, '{folded[0]}', '{b}'}},\n")
    w("};\n")
    w(f"const std::size_t kNumDigitFolds = {len(folds)};\n\n")

    w("}  // namespace cprep::uni\n")


if __name__ == "__main__":
    main()
