#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "cprep/corpus.hpp"

namespace cprep {

struct Route {
    enum class Kind { Direct, Pivot };
    Kind kind = Kind::Direct;
    std::optional<LangCode> via;  // set iff kind == Pivot; never src or tgt

    static Route direct() { return {Kind::Direct, std::nullopt}; }
    static Route pivot(LangCode via) { return {Kind::Pivot, via}; }
    bool operator==(const Route&) const = default;
};

// Routing policy: low-resource directions pivot through the hub language,
// X->French goes through the pivot as well, French->X and every direction
// touching the pivot run direct. Per-direction overrides win.
class RoutingTable {
  public:
    RoutingTable();
    RoutingTable(LangCode pivot_lang, std::set<LangCode> hub_langs);

    void add_override(LangCode src, LangCode tgt, Route route);
    Route plan(LangCode src, LangCode tgt) const;

    // TSV lines: "src<TAB>tgt<TAB>direct" or "src<TAB>tgt<TAB>pivot<TAB>via".
    static RoutingTable load_file(const std::string& path);
    void merge_overrides_from_file(const std::string& path);

    LangCode pivot_lang() const { return pivot_; }
    const std::set<LangCode>& hub_langs() const { return hubs_; }

  private:
    LangCode pivot_;
    std::set<LangCode> hubs_;
    std::map<std::pair<LangCode, LangCode>, Route> overrides_;
};

Route plan_route(LangCode src, LangCode tgt, const RoutingTable& table);

struct TaggedPair {
    std::string encoder_input;  // "<tgt> " + source text
    std::string decoder_input;  // "<tgt> " + target text
};

// Prepends the target-language token to both encoder and decoder inputs;
// no source-language token is ever emitted. Re-tagging already tagged text
// is an error.
TaggedPair tag_for_training(const SentencePair& pair);

// Inverse of the tag transform for one side; returns (lang, bare text).
std::pair<LangCode, std::string> detag(std::string_view tagged);

// True when the text already starts with a "<xxx> " language token.
bool has_language_tag(std::string_view text);

}  // namespace cprep
