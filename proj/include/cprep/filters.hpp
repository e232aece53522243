#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cprep/corpus.hpp"

namespace cprep {

struct RuleConfig {
    int min_chars = 30;          // whole-sentence minimum, in code points
    int max_word_chars = 100;    // longest allowed whitespace-delimited token
    std::vector<std::string> code_keywords = {"if (", "==", ".getAttribute"};
    bool url_email_detection = true;
    bool apply_paren_rule = true;
    bool apply_number_rule = true;
    bool apply_punct_rule = true;

    void validate() const;
};

struct ScoreThresholds {
    double min_laser = 1.06;
    double min_lang_score = 0.95;
};

struct Identification {
    LangCode lang;
    double confidence = 0.0;  // in [0, 1]
};

// Pluggable language identifier. `declared` is the language the record
// claims; real identifiers ignore it, the built-in stub echoes it.
class LanguageIdentifier {
  public:
    virtual ~LanguageIdentifier() = default;
    virtual Identification identify(std::string_view text, const LangCode& declared) const = 0;
};

// Echoes the declared language with confidence 1.0 so pipelines run
// without an external model.
class EchoIdentifier final : public LanguageIdentifier {
  public:
    Identification identify(std::string_view, const LangCode& declared) const override {
        return {declared, 1.0};
    }
};

// Structural cleaning rules, applied in a fixed order:
//   1. paren repair: when the two sides disagree on total paren count,
//      strip balanced parenthetical spans from both sides and continue
//   2. NumberMismatch   3. PunctMismatch   4. TooShort
//   5. UrlOrEmail       6. LongWord        7. CodeLike
PairOutcome clean_pair(const SentencePair& pair, const RuleConfig& cfg);

// Single-sided rules only (4-7 above); the two-sided rules never apply.
MonoOutcome clean_mono(const MonoRecord& record, const RuleConfig& cfg);

// Drops mined pairs below the laser / language-score thresholds. Missing
// score keys skip the corresponding rule. Comparison is strict <.
PairOutcome threshold_filter(const SentencePair& pair, const ScoreThresholds& th);
// Monolingual variant: language scores only.
MonoOutcome threshold_filter(const MonoRecord& record, const ScoreThresholds& th);

PairOutcome langid_filter(const SentencePair& pair, const LanguageIdentifier& id,
                          double min_confidence);
MonoOutcome langid_filter(const MonoRecord& record, const LanguageIdentifier& id,
                          double min_confidence);

// Scored-column adapter: reads precomputed identification confidence from
// the record's score fields instead of running a model.
PairOutcome langid_filter_from_scores(const SentencePair& pair, double min_confidence);
MonoOutcome langid_filter_from_scores(const MonoRecord& record, double min_confidence);

}  // namespace cprep
