#include "cprep/filters.hpp"

#include "doctest.h"

using namespace cprep;

namespace {

LangCode lc(const char* code) { return LangCode::parse(code); }

SentencePair pair(const std::string& src, const std::string& tgt, Scores scores = {}) {
    return SentencePair::make(lc("eng"), lc("fra"), src, tgt, std::move(scores));
}

SentencePair swapped(const SentencePair& p) {
    return SentencePair::make(p.tgt_lang, p.src_lang, p.tgt, p.src, p.scores);
}

const RuleConfig kRules{};

}  // namespace

TEST_CASE("number mismatch drops the pair") {
    const auto outcome = clean_pair(
        pair("I have 3 cats at home right now today.", "J'ai des chats à la maison aujourd'hui."),
        kRules);
    REQUIRE_FALSE(outcome.kept());
    CHECK(outcome.reason() == DropReason::NumberMismatch);
}

TEST_CASE("code keywords drop the pair") {
    const auto outcome = clean_pair(pair("Please call element.getAttribute now for the value.",
                                         "Veuillez appeler cette fonction pour la valeur ici."),
                                    kRules);
    REQUIRE_FALSE(outcome.kept());
    CHECK(outcome.reason() == DropReason::CodeLike);
}

TEST_CASE("paren count mismatch strips balanced spans and keeps the pair") {
    const auto outcome = clean_pair(pair("The meeting (postponed twice) starts at noon today.",
                                         "La réunion commence à midi aujourd'hui."),
                                    kRules);
    REQUIRE(outcome.kept());
    CHECK(outcome.modified());
    CHECK(outcome.record().src == "The meeting  starts at noon today.");
    CHECK(outcome.record().tgt == "La réunion commence à midi aujourd'hui.");

    // Equal counts leave both sides alone.
    const auto untouched = clean_pair(pair("Left (a) side stays put for sure today.",
                                           "Right (b) side stays put as well today."),
                                      kRules);
    REQUIRE(untouched.kept());
    CHECK_FALSE(untouched.modified());
}

TEST_CASE("too-short pairs drop after paren repair") {
    const auto outcome = clean_pair(pair("Hi.", "Salut."), kRules);
    REQUIRE_FALSE(outcome.kept());
    CHECK(outcome.reason() == DropReason::TooShort);

    // Stripping a span can push a side under the limit.
    const auto repaired = clean_pair(pair("Short bit (but this span is quite long indeed).",
                                          "Une phrase assez longue sans parenthèses du tout."),
                                     kRules);
    REQUIRE_FALSE(repaired.kept());
    CHECK(repaired.reason() == DropReason::TooShort);
}

TEST_CASE("final punctuation mismatch drops the pair") {
    const auto outcome = clean_pair(
        pair("Are you coming to the party tonight?", "Tu viens à la fête ce soir."), kRules);
    REQUIRE_FALSE(outcome.kept());
    CHECK(outcome.reason() == DropReason::PunctMismatch);

    // Same watched class on both sides is fine.
    const auto both = clean_pair(
        pair("Are you coming to the party tonight?", "Tu viens à la fête avec nous ce soir ?"),
        kRules);
    CHECK(both.kept());

    // '.' is not watched, so '.' vs nothing is not a mismatch.
    const auto dot = clean_pair(
        pair("This sentence ends with a period today.", "Cette phrase se termine sans point"),
        kRules);
    CHECK(dot.kept());
}

TEST_CASE("urls and emails drop either side") {
    const auto url = clean_pair(pair("Visit https://example.com for the schedule today.",
                                     "Visitez le site pour le programme complet du jour."),
                                kRules);
    REQUIRE_FALSE(url.kept());
    CHECK(url.reason() == DropReason::UrlOrEmail);

    const auto email = clean_pair(pair("The full program is available on our website now.",
                                       "Écrivez à contact@example.org pour le programme."),
                                  kRules);
    REQUIRE_FALSE(email.kept());
    CHECK(email.reason() == DropReason::UrlOrEmail);

    const auto www = clean_pair(pair("See www.example.org for all remaining details today.",
                                     "Voir le site pour tous les détails restants du jour."),
                                kRules);
    REQUIRE_FALSE(www.kept());
    CHECK(www.reason() == DropReason::UrlOrEmail);
}

TEST_CASE("overlong words drop the pair") {
    std::string long_word(150, 'x');
    const auto outcome = clean_pair(pair("This sentence contains the token " + long_word + " ok.",
                                         "Cette phrase contient un jeton beaucoup trop long là."),
                                    kRules);
    REQUIRE_FALSE(outcome.kept());
    CHECK(outcome.reason() == DropReason::LongWord);
}

TEST_CASE("rule order is fixed: first triggered rule wins") {
    // Numbers mismatch AND too short: number rule fires first.
    const auto outcome = clean_pair(pair("3 cats here.", "Des chats ici."), kRules);
    REQUIRE_FALSE(outcome.kept());
    CHECK(outcome.reason() == DropReason::NumberMismatch);
}

TEST_CASE("symmetric rules give the same verdict with sides swapped") {
    const std::vector<SentencePair> cases = {
        pair("I have 3 cats at home right now today.", "J'ai des chats à la maison aujourd'hui."),
        pair("Are you coming to the party tonight?", "Tu viens à la fête ce soir."),
        pair("The meeting (postponed twice) starts at noon today.",
             "La réunion commence à midi aujourd'hui."),
        pair("Hi.", "Salut."),
        pair("A perfectly ordinary sentence that passes all rules.",
             "Une phrase parfaitement ordinaire qui passe toutes les règles."),
    };
    for (const auto& p : cases) {
        const auto forward = clean_pair(p, kRules);
        const auto reverse = clean_pair(swapped(p), kRules);
        CHECK(forward.kept() == reverse.kept());
        if (!forward.kept()) CHECK(forward.reason() == reverse.reason());
    }
}

TEST_CASE("kept pairs are fixpoints of clean_pair") {
    const std::vector<SentencePair> cases = {
        pair("The meeting (postponed twice) starts at noon today.",
             "La réunion commence à midi aujourd'hui."),
        pair("A perfectly ordinary sentence that passes all rules.",
             "Une phrase parfaitement ordinaire qui passe toutes les règles."),
    };
    for (const auto& p : cases) {
        const auto first = clean_pair(p, kRules);
        if (!first.kept()) continue;
        const auto second = clean_pair(first.record(), kRules);
        REQUIRE(second.kept());
        CHECK_FALSE(second.modified());
        CHECK(second.record() == first.record());
    }
}

TEST_CASE("clean_mono applies only single-sided rules") {
    RuleConfig cfg;
    const auto url = clean_mono(
        MonoRecord::make(lc("eng"), "Visit https://example.com for the full schedule today"),
        cfg);
    REQUIRE_FALSE(url.kept());
    CHECK(url.reason() == DropReason::UrlOrEmail);

    const auto fine = clean_mono(
        MonoRecord::make(lc("eng"),
                         "This mono record is comfortably longer than thirty characters and has "
                         "no suspicious content in it at all."),
        cfg);
    CHECK(fine.kept());

    std::string long_word(150, 'y');
    const auto word = clean_mono(MonoRecord::make(lc("eng"), "prefix " + long_word + " suffix"),
                                 cfg);
    REQUIRE_FALSE(word.kept());
    CHECK(word.reason() == DropReason::LongWord);

    // Mono cleaning never yields the two-sided reasons.
    const auto numbers = clean_mono(
        MonoRecord::make(lc("eng"), "Rooms 3 and 12 are open today? Really now!"), cfg);
    CHECK(numbers.kept());
}

TEST_CASE("threshold boundaries are strict less-than") {
    ScoreThresholds th;
    const auto drop_laser = threshold_filter(pair("a", "b", {{"laser_score", 1.05}}), th);
    REQUIRE_FALSE(drop_laser.kept());
    CHECK(drop_laser.reason() == DropReason::LaserBelowThreshold);

    CHECK(threshold_filter(pair("a", "b",
                                {{"laser_score", 1.06},
                                 {"src_lang_score", 0.99},
                                 {"tgt_lang_score", 0.99}}),
                           th)
              .kept());

    const auto drop_lang = threshold_filter(pair("a", "b", {{"src_lang_score", 0.94}}), th);
    REQUIRE_FALSE(drop_lang.kept());
    CHECK(drop_lang.reason() == DropReason::LangScoreBelowThreshold);

    CHECK(threshold_filter(pair("a", "b", {{"tgt_lang_score", 0.95}}), th).kept());
    // Missing keys skip the rule.
    CHECK(threshold_filter(pair("a", "b"), th).kept());
}

TEST_CASE("mono thresholds use language scores only") {
    ScoreThresholds th;
    const auto rec = MonoRecord::make(lc("eng"), "text", {{"laser_score", 0.2}});
    CHECK(threshold_filter(rec, th).kept());  // laser ignored for mono
    const auto low = MonoRecord::make(lc("eng"), "text", {{"lang_score", 0.5}});
    REQUIRE_FALSE(threshold_filter(low, th).kept());
    CHECK(threshold_filter(low, th).reason() == DropReason::LangScoreBelowThreshold);
}

namespace {

// Misidentifies any text containing the trap token.
class TrapIdentifier final : public LanguageIdentifier {
  public:
    Identification identify(std::string_view text, const LangCode& declared) const override {
        if (text.find("LANGID_TRAP") != std::string_view::npos) {
            return {LangCode::parse("zzz"), 0.99};
        }
        return {declared, 0.99};
    }
};

}  // namespace

TEST_CASE("langid filter compares against the declared language") {
    const TrapIdentifier trap;
    const EchoIdentifier echo;

    const auto ok = langid_filter(MonoRecord::make(lc("yor"), "ordinary text"), trap, 0.9);
    CHECK(ok.kept());

    const auto bad = langid_filter(MonoRecord::make(lc("yor"), "has LANGID_TRAP inside"), trap,
                                   0.9);
    REQUIRE_FALSE(bad.kept());
    CHECK(bad.reason() == DropReason::LangIdFail);

    // Low confidence also fails.
    const auto low_conf = langid_filter(MonoRecord::make(lc("yor"), "ordinary"), trap, 0.999);
    CHECK_FALSE(low_conf.kept());

    // The echo stub keeps everything.
    CHECK(langid_filter(MonoRecord::make(lc("yor"), "whatever at all"), echo, 0.95).kept());
    CHECK(langid_filter(pair("any source text", "any target text"), echo, 0.95).kept());
}

TEST_CASE("scored-column adapter reads precomputed confidences") {
    const auto keep = langid_filter_from_scores(
        pair("a", "b", {{"src_lang_score", 0.97}, {"tgt_lang_score", 0.98}}), 0.95);
    CHECK(keep.kept());
    const auto drop = langid_filter_from_scores(
        pair("a", "b", {{"src_lang_score", 0.97}, {"tgt_lang_score", 0.80}}), 0.95);
    REQUIRE_FALSE(drop.kept());
    CHECK(drop.reason() == DropReason::LangIdFail);
    // No scores: nothing to check.
    CHECK(langid_filter_from_scores(pair("a", "b"), 0.95).kept());
}
