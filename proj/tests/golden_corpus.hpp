// A 30-record bitext corpus where each cleaning rule fires exactly once.
// Shared between the pipeline unit tests and the acceptance suite.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "cprep/corpus.hpp"
#include "cprep/filters.hpp"

namespace cprep::testdata {

// Identifier that misreports any text containing "LANGID_TRAP".
class TrapIdentifier final : public LanguageIdentifier {
  public:
    Identification identify(std::string_view text, const LangCode& declared) const override {
        if (text.find("LANGID_TRAP") != std::string_view::npos) {
            return {LangCode::parse("zzz"), 0.99};
        }
        return {declared, 0.99};
    }
};

struct GoldenCorpus {
    std::vector<SentencePair> records;
    std::map<std::string, std::uint64_t> expected_reasons;  // reason name -> count
    std::uint64_t expected_kept = 0;
    std::uint64_t expected_modified = 0;
};

inline GoldenCorpus golden_corpus() {
    const auto eng = LangCode::parse("eng");
    const auto fra = LangCode::parse("fra");
    const auto mk = [&](const std::string& src, const std::string& tgt, Scores scores = {}) {
        return SentencePair::make(eng, fra, src, tgt, std::move(scores));
    };
    const Scores good_scores{{"laser_score", 1.5},
                             {"src_lang_score", 0.99},
                             {"tgt_lang_score", 0.99}};

    GoldenCorpus corpus;
    auto& r = corpus.records;

    // One trap per rule. Every trap passes all the other rules.
    r.push_back(mk("I have 3 cats at home right now today.",
                   "J'ai des chats a la maison aujourd'hui.", good_scores));  // NumberMismatch
    r.push_back(mk("Are you coming to the party tonight?",
                   "Tu viens a la fete avec nous ce soir la.", good_scores));  // PunctMismatch
    r.push_back(mk("Hi.", "Salut.", good_scores));                             // TooShort
    r.push_back(mk("Visit https://example.com for the schedule today.",
                   "Visitez le site pour le programme complet du jour.",
                   good_scores));  // UrlOrEmail
    r.push_back(mk("This sentence contains the token " + std::string(150, 'x') + " inside.",
                   "Cette phrase contient un jeton broyeur beaucoup trop long.",
                   good_scores));  // LongWord
    r.push_back(mk("Please call element.getAttribute now for the value.",
                   "Veuillez appeler cette fonction pour la valeur ici.",
                   good_scores));  // CodeLike
    r.push_back(mk("mm mm mm MPEE(um) MPEP(um) mm mm mm mm mm mm kg kg",
                   "Une phrase (a) tout a fait (b) normale pour le test la",
                   good_scores));  // MdlNoisy
    r.push_back(mk("This sentence contains LANGID_TRAP somewhere inside it.",
                   "Cette phrase contient un piege quelque part dedans la.",
                   good_scores));  // LangIdFail
    r.push_back(mk("A mined sentence whose alignment score sits just below.",
                   "Une phrase minee dont le score est juste en dessous.",
                   {{"laser_score", 1.05},
                    {"src_lang_score", 0.99},
                    {"tgt_lang_score", 0.99}}));  // LaserBelowThreshold
    r.push_back(mk("A mined sentence whose language score sits just below.",
                   "Une phrase minee dont le score de langue est trop bas.",
                   {{"laser_score", 1.5},
                    {"src_lang_score", 0.94},
                    {"tgt_lang_score", 0.99}}));  // LangScoreBelowThreshold

    // Paren repair: counts differ, the span is stripped, the pair survives.
    r.push_back(mk("The meeting (postponed twice) starts at noon today.",
                   "La reunion commence a midi aujourd'hui maintenant.", good_scores));

    // Exact duplicate: the second copy drops.
    r.push_back(mk("This perfectly clean sentence appears exactly twice here.",
                   "Cette phrase parfaitement propre apparait deux fois ici.", good_scores));
    r.push_back(mk("This perfectly clean sentence appears exactly twice here.",
                   "Cette phrase parfaitement propre apparait deux fois ici.", good_scores));

    // Inconsistent translation: same source, different target.
    r.push_back(mk("A source sentence with two competing translations today.",
                   "Une premiere traduction concurrente pour cette phrase.", good_scores));
    r.push_back(mk("A source sentence with two competing translations today.",
                   "Une seconde traduction concurrente pour cette phrase la.", good_scores));

    // Fifteen ordinary keepers to reach thirty records.
    const std::vector<std::pair<std::string, std::string>> keepers = {
        {"The farmers planted maize along the river bank this season.",
         "Les fermiers ont plante du mais le long de la riviere."},
        {"Schools reopened across the region after the long holidays.",
         "Les ecoles ont rouvert dans la region apres les vacances."},
        {"The council approved a budget for rural road maintenance.",
         "Le conseil a approuve un budget pour entretenir les routes."},
        {"Traders gathered at the market before sunrise as usual.",
         "Les commercants se sont reunis au marche avant le lever."},
        {"The clinic offers free checkups every other Thursday morning.",
         "La clinique offre des examens gratuits un jeudi sur deux."},
        {"Fishermen repaired their nets while waiting for the tide.",
         "Les pecheurs ont repare leurs filets en attendant la maree."},
        {"The library extended its opening hours during examinations.",
         "La bibliotheque a prolonge ses horaires pendant les examens."},
        {"Volunteers cleared the drainage channels before the rains.",
         "Des benevoles ont nettoye les canaux avant les pluies."},
        {"The museum unveiled a new exhibition about coastal trade.",
         "Le musee a devoile une exposition sur le commerce cotier."},
        {"Engineers inspected the bridge after the heavy flooding.",
         "Les ingenieurs ont inspecte le pont apres les inondations."},
        {"The choir rehearsed a new song for the harvest festival.",
         "La chorale a repete un nouveau chant pour la fete des recoltes."},
        {"Farmers discussed irrigation methods at the cooperative.",
         "Les agriculteurs ont adopte de nouveaux outils champetres."},
        {"The bakery donates unsold bread to the shelter each evening.",
         "La boulangerie donne le pain invendu au refuge chaque soir."},
        {"Students presented their science projects to the visitors.",
         "Les eleves ont presente leurs projets scientifiques aux visiteurs."},
        {"The weather service warned of strong winds along the coast.",
         "La meteo a annonce des vents violents le long de la cote."},
    };
    for (const auto& [src, tgt] : keepers) r.push_back(mk(src, tgt, good_scores));

    corpus.expected_reasons = {
        {"NumberMismatch", 1},       {"PunctMismatch", 1},
        {"TooShort", 1},             {"UrlOrEmail", 1},
        {"LongWord", 1},             {"CodeLike", 1},
        {"MdlNoisy", 1},             {"LangIdFail", 1},
        {"LaserBelowThreshold", 1},  {"LangScoreBelowThreshold", 1},
        {"Duplicate", 1},            {"InconsistentTranslation", 1},
    };
    corpus.expected_kept = corpus.records.size() - 12;
    corpus.expected_modified = 1;
    return corpus;
}

}  // namespace cprep::testdata
