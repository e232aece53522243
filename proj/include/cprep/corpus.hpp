#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cprep/error.hpp"

namespace cprep {

// Three ASCII lowercase letters, e.g. "eng", "fuv", "yor".
class LangCode {
  public:
    LangCode() : code_{'z', 'z', 'z'} {}
    static LangCode parse(std::string_view text);

    std::string str() const { return std::string(code_.data(), 3); }
    auto operator<=>(const LangCode&) const = default;

  private:
    std::array<char, 3> code_;
};

using Scores = std::map<std::string, double>;

// One bitext record. Text fields never contain tabs or newlines; any
// embedded ones are replaced by single spaces at construction.
struct SentencePair {
    LangCode src_lang;
    LangCode tgt_lang;
    std::string src;
    std::string tgt;
    Scores scores;

    static SentencePair make(LangCode src_lang, LangCode tgt_lang, std::string src,
                             std::string tgt, Scores scores = {});
    bool operator==(const SentencePair&) const = default;
};

struct MonoRecord {
    LangCode lang;
    std::string text;
    Scores scores;

    static MonoRecord make(LangCode lang, std::string text, Scores scores = {});
    bool operator==(const MonoRecord&) const = default;
};

enum class DropReason {
    TooShort,
    NumberMismatch,
    PunctMismatch,
    UrlOrEmail,
    LongWord,
    CodeLike,
    LangIdFail,
    LaserBelowThreshold,
    LangScoreBelowThreshold,
    MdlNoisy,
    Duplicate,
    InconsistentTranslation,
    MalformedLine,
};

std::string_view drop_reason_name(DropReason reason);
std::optional<DropReason> drop_reason_from_name(std::string_view name);
inline constexpr int kNumDropReasons = 13;

template <typename Record>
class FilterOutcome {
  public:
    static FilterOutcome keep(Record record, bool modified = false) {
        FilterOutcome out;
        out.record_ = std::move(record);
        out.modified_ = modified;
        return out;
    }
    static FilterOutcome drop(DropReason reason) {
        FilterOutcome out;
        out.reason_ = reason;
        return out;
    }

    bool kept() const { return !reason_.has_value(); }
    bool modified() const { return modified_; }
    DropReason reason() const { return *reason_; }
    const Record& record() const { return record_; }
    Record& record() { return record_; }

  private:
    Record record_{};
    std::optional<DropReason> reason_;
    bool modified_ = false;
};

using PairOutcome = FilterOutcome<SentencePair>;
using MonoOutcome = FilterOutcome<MonoRecord>;

// Ordered TSV column layout. The four required columns are src_lang,
// tgt_lang, src, tgt; every other name is a float score column. Trailing
// score columns may be omitted on a line, and an empty score field means
// "absent".
class ColumnSpec {
  public:
    ColumnSpec() : ColumnSpec({"src_lang", "tgt_lang", "src", "tgt"}) {}
    explicit ColumnSpec(std::vector<std::string> names);

    static ColumnSpec parse(std::string_view comma_separated);
    static ColumnSpec with_default_scores();  // + laser_score, src_lang_score, tgt_lang_score

    const std::vector<std::string>& names() const { return names_; }
    std::string to_string() const;

  private:
    std::vector<std::string> names_;
};

SentencePair parse_bitext_line(std::string_view line, const ColumnSpec& spec);
std::string serialize_pair(const SentencePair& pair, const ColumnSpec& spec);

// Monolingual format: "lang\ttext" plus optional score columns.
class MonoColumnSpec {
  public:
    MonoColumnSpec() : MonoColumnSpec({"lang", "text"}) {}
    explicit MonoColumnSpec(std::vector<std::string> names);
    static MonoColumnSpec parse(std::string_view comma_separated);

    const std::vector<std::string>& names() const { return names_; }

  private:
    std::vector<std::string> names_;
};

MonoRecord parse_mono_line(std::string_view line, const MonoColumnSpec& spec);
// Plain-lines mode: the whole line is the text, language given out of band.
MonoRecord parse_mono_plain_line(std::string_view line, LangCode lang);
std::string serialize_mono(const MonoRecord& record, const MonoColumnSpec& spec);

// Splits a pair into its two monolingual sides; scores propagate to both.
std::pair<MonoRecord, MonoRecord> split_pair_to_mono(const SentencePair& pair);

std::string format_score(double value);

}  // namespace cprep
