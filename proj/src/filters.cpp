#include "cprep/filters.hpp"

#include <algorithm>
#include <cctype>

#include "cprep/textnorm.hpp"
#include "cprep/utf8.hpp"

namespace cprep {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool contains_ci(std::string_view text, std::string_view pattern) {
    if (pattern.empty() || text.size() < pattern.size()) return false;
    for (std::size_t i = 0; i + pattern.size() <= text.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < pattern.size(); ++j) {
            if (std::tolower(static_cast<unsigned char>(text[i + j])) !=
                std::tolower(static_cast<unsigned char>(pattern[j]))) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

bool has_url_or_email(std::string_view text) {
    if (contains_ci(text, "http://") || contains_ci(text, "https://") ||
        contains_ci(text, "www.")) {
        return true;
    }
    // Email: a whitespace-delimited token with '@' and a '.' after it.
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t j = i;
        while (j < text.size() && !is_space(text[j])) ++j;
        const std::string_view token = text.substr(i, j - i);
        const std::size_t at = token.find('@');
        if (at != std::string_view::npos && at > 0 &&
            token.find('.', at + 1) != std::string_view::npos) {
            return true;
        }
        i = j;
    }
    return false;
}

bool has_long_word(std::string_view text, int max_word_chars) {
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t j = i;
        while (j < text.size() && !is_space(text[j])) ++j;
        if (j > i &&
            utf8::count_codepoints(text.substr(i, j - i)) > static_cast<std::size_t>(max_word_chars)) {
            return true;
        }
        i = j;
    }
    return false;
}

bool has_code_keyword(std::string_view text, const std::vector<std::string>& keywords) {
    return std::any_of(keywords.begin(), keywords.end(), [&](const std::string& kw) {
        return text.find(kw) != std::string_view::npos;
    });
}

// Rules 4-7, shared between the pair and mono paths. Returns the first
// triggered reason or nothing.
std::optional<DropReason> single_side_rules(std::string_view a, std::string_view b,
                                            const RuleConfig& cfg) {
    if (utf8::count_codepoints(a) < static_cast<std::size_t>(cfg.min_chars) ||
        (!b.empty() && utf8::count_codepoints(b) < static_cast<std::size_t>(cfg.min_chars))) {
        return DropReason::TooShort;
    }
    if (cfg.url_email_detection && (has_url_or_email(a) || has_url_or_email(b))) {
        return DropReason::UrlOrEmail;
    }
    if (has_long_word(a, cfg.max_word_chars) || has_long_word(b, cfg.max_word_chars)) {
        return DropReason::LongWord;
    }
    if (has_code_keyword(a, cfg.code_keywords) || has_code_keyword(b, cfg.code_keywords)) {
        return DropReason::CodeLike;
    }
    return std::nullopt;
}

}  // namespace

void RuleConfig::validate() const {
    if (min_chars < 0 || max_word_chars < 1) {
        throw Error(ErrorCode::InvalidParams, "rule config out of range");
    }
    for (const auto& kw : code_keywords) {
        if (kw.empty()) throw Error(ErrorCode::InvalidParams, "empty code keyword");
    }
}

PairOutcome clean_pair(const SentencePair& pair, const RuleConfig& cfg) {
    std::string src = pair.src;
    std::string tgt = pair.tgt;
    bool modified = false;

    if (cfg.apply_paren_rule) {
        const ParenProfile src_profile = paren_profile(src);
        const ParenProfile tgt_profile = paren_profile(tgt);
        if (src_profile.open_count + src_profile.close_count !=
            tgt_profile.open_count + tgt_profile.close_count) {
            if (!src_profile.spans.empty()) {
                src = strip_paren_spans(src);
                modified = true;
            }
            if (!tgt_profile.spans.empty()) {
                tgt = strip_paren_spans(tgt);
                modified = true;
            }
        }
    }

    if (cfg.apply_number_rule && extract_numbers(src) != extract_numbers(tgt)) {
        return PairOutcome::drop(DropReason::NumberMismatch);
    }

    if (cfg.apply_punct_rule) {
        const auto src_punct = final_punct_class(src);
        const auto tgt_punct = final_punct_class(tgt);
        if (src_punct != tgt_punct) {
            return PairOutcome::drop(DropReason::PunctMismatch);
        }
    }

    if (const auto reason = single_side_rules(src, tgt, cfg)) {
        return PairOutcome::drop(*reason);
    }

    if (!modified) return PairOutcome::keep(pair);
    return PairOutcome::keep(
        SentencePair::make(pair.src_lang, pair.tgt_lang, std::move(src), std::move(tgt),
                           pair.scores),
        /*modified=*/true);
}

MonoOutcome clean_mono(const MonoRecord& record, const RuleConfig& cfg) {
    if (const auto reason = single_side_rules(record.text, {}, cfg)) {
        return MonoOutcome::drop(*reason);
    }
    return MonoOutcome::keep(record);
}

namespace {

std::optional<DropReason> score_thresholds(const Scores& scores, const ScoreThresholds& th,
                                           bool check_laser) {
    if (check_laser) {
        const auto laser = scores.find("laser_score");
        if (laser != scores.end() && laser->second < th.min_laser) {
            return DropReason::LaserBelowThreshold;
        }
    }
    for (const char* key : {"src_lang_score", "tgt_lang_score", "lang_score"}) {
        const auto it = scores.find(key);
        if (it != scores.end() && it->second < th.min_lang_score) {
            return DropReason::LangScoreBelowThreshold;
        }
    }
    return std::nullopt;
}

}  // namespace

PairOutcome threshold_filter(const SentencePair& pair, const ScoreThresholds& th) {
    if (const auto reason = score_thresholds(pair.scores, th, /*check_laser=*/true)) {
        return PairOutcome::drop(*reason);
    }
    return PairOutcome::keep(pair);
}

MonoOutcome threshold_filter(const MonoRecord& record, const ScoreThresholds& th) {
    // Monolingual records are cleaned with language scores only.
    if (const auto reason = score_thresholds(record.scores, th, /*check_laser=*/false)) {
        return MonoOutcome::drop(*reason);
    }
    return MonoOutcome::keep(record);
}

PairOutcome langid_filter(const SentencePair& pair, const LanguageIdentifier& id,
                          double min_confidence) {
    const Identification src_id = id.identify(pair.src, pair.src_lang);
    if (src_id.lang != pair.src_lang || src_id.confidence < min_confidence) {
        return PairOutcome::drop(DropReason::LangIdFail);
    }
    const Identification tgt_id = id.identify(pair.tgt, pair.tgt_lang);
    if (tgt_id.lang != pair.tgt_lang || tgt_id.confidence < min_confidence) {
        return PairOutcome::drop(DropReason::LangIdFail);
    }
    return PairOutcome::keep(pair);
}

MonoOutcome langid_filter(const MonoRecord& record, const LanguageIdentifier& id,
                          double min_confidence) {
    const Identification ident = id.identify(record.text, record.lang);
    if (ident.lang != record.lang || ident.confidence < min_confidence) {
        return MonoOutcome::drop(DropReason::LangIdFail);
    }
    return MonoOutcome::keep(record);
}

PairOutcome langid_filter_from_scores(const SentencePair& pair, double min_confidence) {
    for (const char* key : {"src_lang_score", "tgt_lang_score"}) {
        const auto it = pair.scores.find(key);
        if (it != pair.scores.end() && it->second < min_confidence) {
            return PairOutcome::drop(DropReason::LangIdFail);
        }
    }
    return PairOutcome::keep(pair);
}

MonoOutcome langid_filter_from_scores(const MonoRecord& record, double min_confidence) {
    for (const char* key : {"src_lang_score", "tgt_lang_score", "lang_score"}) {
        const auto it = record.scores.find(key);
        if (it != record.scores.end() && it->second < min_confidence) {
            return MonoOutcome::drop(DropReason::LangIdFail);
        }
    }
    return MonoOutcome::keep(record);
}

}  // namespace cprep
