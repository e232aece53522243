#include "cprep/routing.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace cprep {

RoutingTable::RoutingTable() : RoutingTable(LangCode::parse("eng"),
                                            {LangCode::parse("eng"), LangCode::parse("fra")}) {}

RoutingTable::RoutingTable(LangCode pivot_lang, std::set<LangCode> hub_langs)
    : pivot_(pivot_lang), hubs_(std::move(hub_langs)) {
    if (!hubs_.count(pivot_)) {
        throw Error(ErrorCode::ConfigInvalid, "pivot language must be a hub language");
    }
}

void RoutingTable::add_override(LangCode src, LangCode tgt, Route route) {
    if (src == tgt) throw Error(ErrorCode::SameLanguage, src.str());
    if (route.kind == Route::Kind::Pivot && (!route.via || *route.via == src || *route.via == tgt)) {
        throw Error(ErrorCode::ConfigInvalid, "pivot route must go via a third language");
    }
    overrides_[{src, tgt}] = route;
}

Route RoutingTable::plan(LangCode src, LangCode tgt) const {
    if (src == tgt) throw Error(ErrorCode::SameLanguage, src.str());
    const auto it = overrides_.find({src, tgt});
    if (it != overrides_.end()) return it->second;

    const bool src_hub = hubs_.count(src) > 0;
    const bool tgt_hub = hubs_.count(tgt) > 0;
    if (!src_hub && !tgt_hub) return Route::pivot(pivot_);
    // Directions touching the pivot itself run direct, as does hub -> X.
    if (src == pivot_ || tgt == pivot_) return Route::direct();
    if (src_hub) return Route::direct();
    // X -> non-pivot hub (e.g. X -> French) goes through the pivot.
    return Route::pivot(pivot_);
}

RoutingTable RoutingTable::load_file(const std::string& path) {
    RoutingTable table;
    table.merge_overrides_from_file(path);
    return table;
}

void RoutingTable::merge_overrides_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream ss(line);
        std::string field;
        while (std::getline(ss, field, '\t')) fields.push_back(field);
        const auto fail = [&](const std::string& why) {
            throw Error(ErrorCode::ConfigInvalid,
                        path + ":" + std::to_string(line_no) + ": " + why);
        };
        if (fields.size() < 3) fail("expected src, tgt, route");
        const LangCode src = LangCode::parse(fields[0]);
        const LangCode tgt = LangCode::parse(fields[1]);
        if (fields[2] == "direct") {
            if (fields.size() != 3) fail("direct route takes no via");
            add_override(src, tgt, Route::direct());
        } else if (fields[2] == "pivot") {
            if (fields.size() != 4) fail("pivot route needs a via language");
            add_override(src, tgt, Route::pivot(LangCode::parse(fields[3])));
        } else {
            fail("route must be 'direct' or 'pivot'");
        }
    }
}

Route plan_route(LangCode src, LangCode tgt, const RoutingTable& table) {
    return table.plan(src, tgt);
}

bool has_language_tag(std::string_view text) {
    if (text.size() < 6 || text[0] != '<' || text[4] != '>' || text[5] != ' ') return false;
    for (int i = 1; i <= 3; ++i) {
        if (text[i] < 'a' || text[i] > 'z') return false;
    }
    return true;
}

TaggedPair tag_for_training(const SentencePair& pair) {
    if (has_language_tag(pair.src) || has_language_tag(pair.tgt)) {
        throw Error(ErrorCode::AlreadyTagged, "input already carries a language token");
    }
    const std::string token = "<" + pair.tgt_lang.str() + "> ";
    return {token + pair.src, token + pair.tgt};
}

std::pair<LangCode, std::string> detag(std::string_view tagged) {
    if (!has_language_tag(tagged)) {
        throw Error(ErrorCode::MalformedLine, "no language token to remove");
    }
    return {LangCode::parse(tagged.substr(1, 3)), std::string(tagged.substr(6))};
}

}  // namespace cprep
