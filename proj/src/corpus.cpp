#include "cprep/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "cprep/utf8.hpp"

namespace cprep {

namespace {

std::string sanitize_text(std::string text) {
    for (char& c : text) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t tab = line.find('\t', pos);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

bool is_required_column(std::string_view name) {
    return name == "src_lang" || name == "tgt_lang" || name == "src" || name == "tgt";
}

double parse_score(std::string_view field, std::string_view column) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::BadScore,
                    "column '" + std::string(column) + "' has non-numeric value '" +
                        std::string(field) + "'");
    }
    return value;
}

}  // namespace

LangCode LangCode::parse(std::string_view text) {
    if (text.size() != 3 || !std::all_of(text.begin(), text.end(), [](char c) {
            return c >= 'a' && c <= 'z';
        })) {
        throw Error(ErrorCode::BadLangCode, "'" + std::string(text) + "'");
    }
    LangCode code;
    std::copy(text.begin(), text.end(), code.code_.begin());
    return code;
}

SentencePair SentencePair::make(LangCode src_lang, LangCode tgt_lang, std::string src,
                                std::string tgt, Scores scores) {
    SentencePair pair;
    pair.src_lang = src_lang;
    pair.tgt_lang = tgt_lang;
    pair.src = sanitize_text(std::move(src));
    pair.tgt = sanitize_text(std::move(tgt));
    pair.scores = std::move(scores);
    return pair;
}

MonoRecord MonoRecord::make(LangCode lang, std::string text, Scores scores) {
    MonoRecord record;
    record.lang = lang;
    record.text = sanitize_text(std::move(text));
    record.scores = std::move(scores);
    return record;
}

std::string_view drop_reason_name(DropReason reason) {
    switch (reason) {
        case DropReason::TooShort: return "TooShort";
        case DropReason::NumberMismatch: return "NumberMismatch";
        case DropReason::PunctMismatch: return "PunctMismatch";
        case DropReason::UrlOrEmail: return "UrlOrEmail";
        case DropReason::LongWord: return "LongWord";
        case DropReason::CodeLike: return "CodeLike";
        case DropReason::LangIdFail: return "LangIdFail";
        case DropReason::LaserBelowThreshold: return "LaserBelowThreshold";
        case DropReason::LangScoreBelowThreshold: return "LangScoreBelowThreshold";
        case DropReason::MdlNoisy: return "MdlNoisy";
        case DropReason::Duplicate: return "Duplicate";
        case DropReason::InconsistentTranslation: return "InconsistentTranslation";
        case DropReason::MalformedLine: return "MalformedLine";
    }
    return "Unknown";
}

std::optional<DropReason> drop_reason_from_name(std::string_view name) {
    for (int i = 0; i < kNumDropReasons; ++i) {
        const auto reason = static_cast<DropReason>(i);
        if (drop_reason_name(reason) == name) return reason;
    }
    return std::nullopt;
}

ColumnSpec::ColumnSpec(std::vector<std::string> names) : names_(std::move(names)) {
    for (const auto& name : names_) {
        if (name.empty()) throw Error(ErrorCode::ConfigInvalid, "empty column name");
    }
    for (const char* req : {"src_lang", "tgt_lang", "src", "tgt"}) {
        if (std::count(names_.begin(), names_.end(), req) != 1) {
            throw Error(ErrorCode::ConfigInvalid,
                        "column spec must contain '" + std::string(req) + "' exactly once");
        }
    }
}

ColumnSpec ColumnSpec::parse(std::string_view comma_separated) {
    std::vector<std::string> names;
    std::size_t pos = 0;
    while (pos <= comma_separated.size()) {
        const std::size_t comma = comma_separated.find(',', pos);
        if (comma == std::string_view::npos) {
            names.emplace_back(comma_separated.substr(pos));
            break;
        }
        names.emplace_back(comma_separated.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return ColumnSpec(std::move(names));
}

ColumnSpec ColumnSpec::with_default_scores() {
    return ColumnSpec({"src_lang", "tgt_lang", "src", "tgt", "laser_score", "src_lang_score",
                       "tgt_lang_score"});
}

std::string ColumnSpec::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (i) out.push_back(',');
        out += names_[i];
    }
    return out;
}

SentencePair parse_bitext_line(std::string_view line, const ColumnSpec& spec) {
    if (!utf8::is_valid(line)) {
        throw Error(ErrorCode::MalformedLine, "invalid UTF-8");
    }
    const auto fields = split_tabs(line);
    const auto& names = spec.names();
    std::size_t required_count = 0;
    for (const auto& name : names) {
        if (is_required_column(name)) ++required_count;
    }
    // Trailing score columns may be omitted; required columns may not.
    std::size_t min_fields = names.size();
    while (min_fields > 0 && !is_required_column(names[min_fields - 1])) --min_fields;
    if (fields.size() < min_fields || fields.size() > names.size()) {
        throw Error(ErrorCode::MalformedLine,
                    "expected " + std::to_string(min_fields) + ".." +
                        std::to_string(names.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }

    std::string_view src_lang, tgt_lang, src, tgt;
    Scores scores;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string& name = names[i];
        const std::string_view field = fields[i];
        if (name == "src_lang") {
            src_lang = field;
        } else if (name == "tgt_lang") {
            tgt_lang = field;
        } else if (name == "src") {
            src = field;
        } else if (name == "tgt") {
            tgt = field;
        } else if (!field.empty()) {
            scores[name] = parse_score(field, name);
        }
    }
    if (src.empty() || tgt.empty()) {
        throw Error(ErrorCode::MalformedLine, "empty text field");
    }
    return SentencePair::make(LangCode::parse(src_lang), LangCode::parse(tgt_lang),
                              std::string(src), std::string(tgt), std::move(scores));
}

std::string format_score(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string serialize_pair(const SentencePair& pair, const ColumnSpec& spec) {
    const auto& names = spec.names();
    // Find the last column that must be emitted: required ones always, score
    // columns only while a later present score forces them.
    std::size_t last = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (is_required_column(names[i]) || pair.scores.count(names[i])) last = i;
    }
    std::string line;
    for (std::size_t i = 0; i <= last; ++i) {
        if (i) line.push_back('\t');
        const std::string& name = names[i];
        if (name == "src_lang") {
            line += pair.src_lang.str();
        } else if (name == "tgt_lang") {
            line += pair.tgt_lang.str();
        } else if (name == "src") {
            line += pair.src;
        } else if (name == "tgt") {
            line += pair.tgt;
        } else {
            const auto it = pair.scores.find(name);
            if (it != pair.scores.end()) line += format_score(it->second);
        }
    }
    return line;
}

MonoColumnSpec::MonoColumnSpec(std::vector<std::string> names) : names_(std::move(names)) {
    for (const char* req : {"lang", "text"}) {
        if (std::count(names_.begin(), names_.end(), req) != 1) {
            throw Error(ErrorCode::ConfigInvalid,
                        "mono column spec must contain '" + std::string(req) + "' exactly once");
        }
    }
}

MonoColumnSpec MonoColumnSpec::parse(std::string_view comma_separated) {
    std::vector<std::string> names;
    std::size_t pos = 0;
    while (pos <= comma_separated.size()) {
        const std::size_t comma = comma_separated.find(',', pos);
        if (comma == std::string_view::npos) {
            names.emplace_back(comma_separated.substr(pos));
            break;
        }
        names.emplace_back(comma_separated.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return MonoColumnSpec(std::move(names));
}

MonoRecord parse_mono_line(std::string_view line, const MonoColumnSpec& spec) {
    if (!utf8::is_valid(line)) {
        throw Error(ErrorCode::MalformedLine, "invalid UTF-8");
    }
    const auto fields = split_tabs(line);
    const auto& names = spec.names();
    std::size_t min_fields = names.size();
    while (min_fields > 0 && names[min_fields - 1] != "lang" && names[min_fields - 1] != "text") {
        --min_fields;
    }
    if (fields.size() < min_fields || fields.size() > names.size()) {
        throw Error(ErrorCode::MalformedLine,
                    "expected " + std::to_string(min_fields) + ".." +
                        std::to_string(names.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    std::string_view lang, text;
    Scores scores;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string& name = names[i];
        if (name == "lang") {
            lang = fields[i];
        } else if (name == "text") {
            text = fields[i];
        } else if (!fields[i].empty()) {
            scores[name] = parse_score(fields[i], name);
        }
    }
    if (text.empty()) throw Error(ErrorCode::MalformedLine, "empty text field");
    return MonoRecord::make(LangCode::parse(lang), std::string(text), std::move(scores));
}

MonoRecord parse_mono_plain_line(std::string_view line, LangCode lang) {
    if (!utf8::is_valid(line)) {
        throw Error(ErrorCode::MalformedLine, "invalid UTF-8");
    }
    if (line.empty()) throw Error(ErrorCode::MalformedLine, "empty text field");
    return MonoRecord::make(lang, std::string(line));
}

std::string serialize_mono(const MonoRecord& record, const MonoColumnSpec& spec) {
    const auto& names = spec.names();
    std::size_t last = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == "lang" || names[i] == "text" || record.scores.count(names[i])) last = i;
    }
    std::string line;
    for (std::size_t i = 0; i <= last; ++i) {
        if (i) line.push_back('\t');
        const std::string& name = names[i];
        if (name == "lang") {
            line += record.lang.str();
        } else if (name == "text") {
            line += record.text;
        } else {
            const auto it = record.scores.find(name);
            if (it != record.scores.end()) line += format_score(it->second);
        }
    }
    return line;
}

std::pair<MonoRecord, MonoRecord> split_pair_to_mono(const SentencePair& pair) {
    return {MonoRecord::make(pair.src_lang, pair.src, pair.scores),
            MonoRecord::make(pair.tgt_lang, pair.tgt, pair.scores)};
}

}  // namespace cprep
