#include "cprep/pipeline.hpp"

#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <variant>

#include "json.hpp"

#include "cprep/dedup.hpp"
#include "cprep/parallel.hpp"
#include "cprep/routing.hpp"
#include "cprep/shuffle.hpp"

namespace cprep {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool parse_bool(std::string_view value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw Error(ErrorCode::ConfigInvalid, "expected boolean, got '" + std::string(value) + "'");
}

double parse_double(std::string_view value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::ConfigInvalid, "expected number, got '" + std::string(value) + "'");
    }
    return out;
}

std::uint64_t parse_u64(std::string_view value) {
    const double d = parse_double(value);
    if (d < 0 || d != static_cast<double>(static_cast<std::uint64_t>(d))) {
        throw Error(ErrorCode::ConfigInvalid,
                    "expected non-negative integer, got '" + std::string(value) + "'");
    }
    return static_cast<std::uint64_t>(d);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view value, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        std::size_t next = value.find(sep, pos);
        if (next == std::string_view::npos) next = value.size();
        const std::string_view item = trim(value.substr(pos, next - pos));
        if (!item.empty()) out.emplace_back(item);
        pos = next + 1;
    }
    return out;
}

}  // namespace

std::string_view stage_name(StageKind kind) {
    switch (kind) {
        case StageKind::CleanPair: return "clean-pair";
        case StageKind::CleanMono: return "clean-mono";
        case StageKind::Threshold: return "threshold";
        case StageKind::LangId: return "langid";
        case StageKind::Mdl: return "mdl";
        case StageKind::DedupExact: return "dedup-exact";
        case StageKind::DedupInconsistent: return "dedup-inconsistent";
        case StageKind::SplitMono: return "split-mono";
        case StageKind::Tag: return "tag";
        case StageKind::Shuffle: return "shuffle";
    }
    return "unknown";
}

std::optional<StageKind> stage_from_name(std::string_view name) {
    for (const StageKind kind :
         {StageKind::CleanPair, StageKind::CleanMono, StageKind::Threshold, StageKind::LangId,
          StageKind::Mdl, StageKind::DedupExact, StageKind::DedupInconsistent,
          StageKind::SplitMono, StageKind::Tag, StageKind::Shuffle}) {
        if (stage_name(kind) == name) return kind;
    }
    return std::nullopt;
}

void PipelineConfig::validate() const {
    if (inputs.empty()) throw Error(ErrorCode::ConfigInvalid, "no input files");
    if (output.empty()) throw Error(ErrorCode::ConfigInvalid, "no output file");
    if (workers < 1) throw Error(ErrorCode::ConfigInvalid, "workers must be >= 1");
    clean.validate();
    mdl.validate();
    if (langid.mode != "echo" && langid.mode != "scores") {
        throw Error(ErrorCode::ConfigInvalid, "langid.mode must be 'echo' or 'scores'");
    }
    if (dedup.inconsistent_backend != "exact" && dedup.inconsistent_backend != "bloom") {
        throw Error(ErrorCode::ConfigInvalid, "dedup.backend must be 'exact' or 'bloom'");
    }
    if (input_kind == InputKind::MonoPlain) LangCode::parse(mono_lang);

    // Stage kinds must chain: pair-only stages cannot follow split-mono.
    bool is_pair = input_kind == InputKind::Pair;
    for (const StageKind stage : stages) {
        switch (stage) {
            case StageKind::CleanPair:
            case StageKind::DedupInconsistent:
            case StageKind::Tag:
                if (!is_pair) {
                    throw Error(ErrorCode::ConfigInvalid,
                                std::string(stage_name(stage)) + " needs a pair stream");
                }
                break;
            case StageKind::SplitMono:
                if (!is_pair) {
                    throw Error(ErrorCode::ConfigInvalid, "split-mono needs a pair stream");
                }
                is_pair = false;
                break;
            case StageKind::CleanMono:
                if (is_pair) {
                    throw Error(ErrorCode::ConfigInvalid, "clean-mono needs a mono stream");
                }
                break;
            default: break;  // kind-agnostic stages
        }
    }
}

void PipelineConfig::apply_override(std::string_view raw_key, std::string_view raw_value) {
    const std::string key(trim(raw_key));
    const std::string value(trim(raw_value));
    const auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::ConfigInvalid, "key '" + key + "': " + why);
    };

    if (key == "input") {
        inputs.push_back(value);
    } else if (key == "inputs") {
        for (auto& item : split_list(value, ',')) inputs.push_back(std::move(item));
    } else if (key == "input_kind") {
        if (value == "pair") input_kind = InputKind::Pair;
        else if (value == "mono") input_kind = InputKind::Mono;
        else if (value == "mono-plain") input_kind = InputKind::MonoPlain;
        else fail("must be pair, mono or mono-plain");
    } else if (key == "mono_lang") {
        mono_lang = value;
    } else if (key == "columns") {
        columns = ColumnSpec::parse(value);
    } else if (key == "mono_columns") {
        mono_columns = MonoColumnSpec::parse(value);
    } else if (key == "skip_header") {
        skip_header = parse_bool(value);
    } else if (key == "output") {
        output = value;
    } else if (key == "dropped_out") {
        dropped_out = value;
    } else if (key == "report") {
        report_path = value;
    } else if (key == "seed") {
        seed = parse_u64(value);
    } else if (key == "workers") {
        workers = static_cast<int>(parse_u64(value));
    } else if (key == "temp_dir") {
        temp_dir = value;
    } else if (key == "stages") {
        stages.clear();
        for (const auto& name : split_list(value, ',')) {
            const auto kind = stage_from_name(name);
            if (!kind) fail("unknown stage '" + name + "'");
            stages.push_back(*kind);
        }
    } else if (key == "clean.min_chars") {
        clean.min_chars = static_cast<int>(parse_u64(value));
    } else if (key == "clean.max_word_chars") {
        clean.max_word_chars = static_cast<int>(parse_u64(value));
    } else if (key == "clean.code_keywords") {
        clean.code_keywords = split_list(value, '|');
    } else if (key == "clean.url_email_detection") {
        clean.url_email_detection = parse_bool(value);
    } else if (key == "clean.apply_paren_rule") {
        clean.apply_paren_rule = parse_bool(value);
    } else if (key == "clean.apply_number_rule") {
        clean.apply_number_rule = parse_bool(value);
    } else if (key == "clean.apply_punct_rule") {
        clean.apply_punct_rule = parse_bool(value);
    } else if (key == "threshold.min_laser") {
        thresholds.min_laser = parse_double(value);
    } else if (key == "threshold.min_lang_score") {
        thresholds.min_lang_score = parse_double(value);
    } else if (key == "langid.mode") {
        langid.mode = value;
    } else if (key == "langid.min_confidence") {
        langid.min_confidence = parse_double(value);
    } else if (key == "mdl.c") {
        mdl.codebook_weight = parse_double(value);
    } else if (key == "mdl.t") {
        mdl.noise_threshold = parse_double(value);
    } else if (key == "mdl.max_candidate_len") {
        mdl.max_candidate_len = static_cast<int>(parse_u64(value));
    } else if (key == "mdl.min_candidate_count") {
        mdl.min_candidate_count = static_cast<int>(parse_u64(value));
    } else if (key == "mdl.max_iterations") {
        mdl.max_iterations = static_cast<int>(parse_u64(value));
    } else if (key == "dedup.capacity") {
        dedup.capacity = parse_u64(value);
    } else if (key == "dedup.fp_rate") {
        dedup.fp_rate = parse_double(value);
    } else if (key == "dedup.backend") {
        dedup.inconsistent_backend = value;
    } else if (key == "shuffle.pointers") {
        shuffle.pointers = parse_u64(value);
    } else if (key == "shuffle.buffer") {
        shuffle.buffer = parse_u64(value);
    } else {
        fail("unknown configuration key");
    }
}

PipelineConfig PipelineConfig::from_text(std::string_view text) {
    PipelineConfig config;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        // Inline comments: '#' preceded by whitespace starts a comment.
        for (std::size_t i = 1; i < line.size(); ++i) {
            if (line[i] == '#' && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line = trim(line.substr(0, i));
                break;
            }
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::ConfigInvalid,
                        "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        config.apply_override(line.substr(0, eq), line.substr(eq + 1));
    }
    return config;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

std::string PipelineConfig::default_config_text() {
    const PipelineConfig d;
    std::ostringstream out;
    out << "# cprep pipeline configuration (defaults)\n"
        << "# input = corpus.tsv            # repeatable\n"
        << "input_kind = pair               # pair | mono | mono-plain\n"
        << "mono_lang = " << d.mono_lang << "\n"
        << "columns = " << d.columns.to_string() << "\n"
        << "mono_columns = lang,text,lang_score\n"
        << "skip_header = false\n"
        << "# output = cleaned.tsv\n"
        << "# dropped_out = dropped.tsv     # dropped records + reason column\n"
        << "# report = report.json\n"
        << "seed = " << d.seed << "\n"
        << "workers = " << d.workers << "\n"
        << "# temp_dir =                    # default: $CPREP_TMPDIR, $TMPDIR, /tmp\n"
        << "stages = dedup-exact,clean-pair,mdl,threshold,dedup-inconsistent\n"
        << "clean.min_chars = " << d.clean.min_chars << "\n"
        << "clean.max_word_chars = " << d.clean.max_word_chars << "\n"
        << "clean.code_keywords = if (|==|.getAttribute\n"
        << "clean.url_email_detection = true\n"
        << "clean.apply_paren_rule = true\n"
        << "clean.apply_number_rule = true\n"
        << "clean.apply_punct_rule = true\n"
        << "threshold.min_laser = " << format_score(d.thresholds.min_laser) << "\n"
        << "threshold.min_lang_score = " << format_score(d.thresholds.min_lang_score) << "\n"
        << "langid.mode = echo              # echo | scores\n"
        << "langid.min_confidence = " << format_score(d.langid.min_confidence) << "\n"
        << "mdl.c = " << format_score(d.mdl.codebook_weight) << "\n"
        << "mdl.t = " << format_score(d.mdl.noise_threshold) << "\n"
        << "mdl.max_candidate_len = " << d.mdl.max_candidate_len << "\n"
        << "mdl.min_candidate_count = " << d.mdl.min_candidate_count << "\n"
        << "mdl.max_iterations = " << d.mdl.max_iterations << "\n"
        << "dedup.capacity = " << d.dedup.capacity << "\n"
        << "dedup.fp_rate = " << format_score(d.dedup.fp_rate) << "\n"
        << "dedup.backend = exact           # exact | bloom\n"
        << "shuffle.pointers = " << d.shuffle.pointers << "\n"
        << "shuffle.buffer = " << d.shuffle.buffer << "\n";
    return out.str();
}

std::uint64_t StageReport::total_dropped() const {
    std::uint64_t total = 0;
    for (const auto& [reason, count] : dropped) total += count;
    return total;
}

std::string RunReport::to_json() const {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["seed"] = seed;
    doc["records_in"] = records_in;
    doc["records_out"] = records_out;
    doc["wall_time_s"] = wall_time_s;
    doc["stages"] = json::array();
    for (const auto& stage : stages) {
        json s;
        s["name"] = stage.name;
        s["input"] = stage.input;
        s["kept"] = stage.kept;
        s["modified"] = stage.modified;
        s["dropped"] = json::object();
        for (const auto& [reason, count] : stage.dropped) s["dropped"][reason] = count;
        s["wall_time_s"] = stage.wall_time_s;
        s["records_per_s"] = stage.records_per_s;
        doc["stages"].push_back(std::move(s));
    }
    return doc.dump(2) + "\n";
}

RunReport RunReport::from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadReport, e.what());
    }
    if (!doc.is_object() || !doc.contains("schema_version") ||
        doc["schema_version"].get<int>() != kSchemaVersion) {
        throw Error(ErrorCode::BadReport, "missing or unsupported schema_version");
    }
    RunReport report;
    try {
        report.seed = doc.value("seed", 0ULL);
        report.records_in = doc.at("records_in").get<std::uint64_t>();
        report.records_out = doc.at("records_out").get<std::uint64_t>();
        report.wall_time_s = doc.value("wall_time_s", 0.0);
        for (const auto& s : doc.at("stages")) {
            StageReport stage;
            stage.name = s.at("name").get<std::string>();
            stage.input = s.at("input").get<std::uint64_t>();
            stage.kept = s.at("kept").get<std::uint64_t>();
            stage.modified = s.value("modified", 0ULL);
            if (s.contains("dropped")) {
                for (const auto& [reason, count] : s.at("dropped").items()) {
                    stage.dropped[reason] = count.get<std::uint64_t>();
                }
            }
            stage.wall_time_s = s.value("wall_time_s", 0.0);
            stage.records_per_s = s.value("records_per_s", 0.0);
            report.stages.push_back(std::move(stage));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadReport, e.what());
    }
    return report;
}

RunReport aggregate_reports(const std::vector<RunReport>& reports) {
    if (reports.empty()) throw Error(ErrorCode::BadReport, "no reports to aggregate");
    RunReport total;
    std::vector<std::string> stage_order;
    std::map<std::string, StageReport> by_name;
    for (const auto& report : reports) {
        total.records_in += report.records_in;
        total.records_out += report.records_out;
        total.wall_time_s += report.wall_time_s;
        total.seed = report.seed;
        for (const auto& stage : report.stages) {
            auto [it, inserted] = by_name.try_emplace(stage.name);
            if (inserted) {
                it->second.name = stage.name;
                stage_order.push_back(stage.name);
            }
            it->second.input += stage.input;
            it->second.kept += stage.kept;
            it->second.modified += stage.modified;
            it->second.wall_time_s += stage.wall_time_s;
            for (const auto& [reason, count] : stage.dropped) {
                it->second.dropped[reason] += count;
            }
        }
    }
    for (const auto& name : stage_order) {
        StageReport& stage = by_name[name];
        stage.records_per_s =
            stage.wall_time_s > 0 ? static_cast<double>(stage.input) / stage.wall_time_s : 0.0;
        total.stages.push_back(std::move(stage));
    }
    return total;
}

std::string format_report_table(const RunReport& report) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-20s %12s %12s %10s %10s\n", "stage", "input", "kept",
                  "modified", "dropped");
    out << line;
    for (const auto& stage : report.stages) {
        std::snprintf(line, sizeof(line), "%-20s %12llu %12llu %10llu %10llu\n",
                      stage.name.c_str(), static_cast<unsigned long long>(stage.input),
                      static_cast<unsigned long long>(stage.kept),
                      static_cast<unsigned long long>(stage.modified),
                      static_cast<unsigned long long>(stage.total_dropped()));
        out << line;
        for (const auto& [reason, count] : stage.dropped) {
            std::snprintf(line, sizeof(line), "    %-36s %llu\n", reason.c_str(),
                          static_cast<unsigned long long>(count));
            out << line;
        }
    }
    std::snprintf(line, sizeof(line), "%-20s %12llu -> %llu records\n", "total",
                  static_cast<unsigned long long>(report.records_in),
                  static_cast<unsigned long long>(report.records_out));
    out << line;
    return out.str();
}

std::string resolve_temp_dir(const std::string& configured) {
    if (!configured.empty()) return configured;
    if (const char* env = std::getenv("CPREP_TMPDIR"); env && *env) return env;
    if (const char* env = std::getenv("TMPDIR"); env && *env) return env;
    return "/tmp";
}

// ---------------------------------------------------------------------------
// Pipeline runner
// ---------------------------------------------------------------------------

namespace {

using Record = std::variant<SentencePair, MonoRecord>;

struct StageResult {
    std::vector<Record> kept;
    std::optional<DropReason> reason;
    bool modified = false;
};

struct StageState {
    StageKind kind;
    StageReport report;
    std::optional<ExactDeduper> exact_deduper;
    std::optional<InconsistentDeduper> inconsistent_deduper;
    bool stateless = false;
};

class DroppedWriter {
  public:
    DroppedWriter(const std::string& path, const ColumnSpec& columns,
                  const MonoColumnSpec& mono_columns)
        : columns_(columns), mono_columns_(mono_columns) {
        if (path.empty()) return;
        out_.emplace(path, std::ios::binary);
        if (!*out_) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    }

    void write(const Record& record, DropReason reason) {
        if (!out_) return;
        if (std::holds_alternative<SentencePair>(record)) {
            *out_ << serialize_pair(std::get<SentencePair>(record), columns_);
        } else {
            *out_ << serialize_mono(std::get<MonoRecord>(record), mono_columns_);
        }
        *out_ << '\t' << drop_reason_name(reason) << '\n';
    }

    void write_raw(std::string_view line, DropReason reason) {
        if (!out_) return;
        *out_ << line << '\t' << drop_reason_name(reason) << '\n';
    }

  private:
    const ColumnSpec& columns_;
    const MonoColumnSpec& mono_columns_;
    std::optional<std::ofstream> out_;
};

// Applies one stateless stage to one record.
StageResult apply_stateless(StageKind kind, const Record& record, const PipelineConfig& config,
                            const LanguageIdentifier* identifier) {
    StageResult result;
    const auto from_pair_outcome = [&](PairOutcome outcome) {
        if (outcome.kept()) {
            result.modified = outcome.modified();
            result.kept.emplace_back(std::move(outcome.record()));
        } else {
            result.reason = outcome.reason();
        }
    };
    const auto from_mono_outcome = [&](MonoOutcome outcome) {
        if (outcome.kept()) {
            result.modified = outcome.modified();
            result.kept.emplace_back(std::move(outcome.record()));
        } else {
            result.reason = outcome.reason();
        }
    };

    try {
        switch (kind) {
            case StageKind::CleanPair:
                from_pair_outcome(clean_pair(std::get<SentencePair>(record), config.clean));
                break;
            case StageKind::CleanMono:
                from_mono_outcome(clean_mono(std::get<MonoRecord>(record), config.clean));
                break;
            case StageKind::Threshold:
                if (std::holds_alternative<SentencePair>(record)) {
                    from_pair_outcome(
                        threshold_filter(std::get<SentencePair>(record), config.thresholds));
                } else {
                    from_mono_outcome(
                        threshold_filter(std::get<MonoRecord>(record), config.thresholds));
                }
                break;
            case StageKind::LangId: {
                const double min_conf = config.langid.min_confidence;
                if (std::holds_alternative<SentencePair>(record)) {
                    const auto& pair = std::get<SentencePair>(record);
                    from_pair_outcome(identifier ? langid_filter(pair, *identifier, min_conf)
                                                 : langid_filter_from_scores(pair, min_conf));
                } else {
                    const auto& mono = std::get<MonoRecord>(record);
                    from_mono_outcome(identifier ? langid_filter(mono, *identifier, min_conf)
                                                 : langid_filter_from_scores(mono, min_conf));
                }
                break;
            }
            case StageKind::Mdl: {
                const auto noisy = [&](const std::string& text) {
                    return is_noisy(text, config.mdl);
                };
                if (std::holds_alternative<SentencePair>(record)) {
                    const auto& pair = std::get<SentencePair>(record);
                    if (noisy(pair.src) || noisy(pair.tgt)) {
                        result.reason = DropReason::MdlNoisy;
                    } else {
                        result.kept.push_back(record);
                    }
                } else {
                    if (noisy(std::get<MonoRecord>(record).text)) {
                        result.reason = DropReason::MdlNoisy;
                    } else {
                        result.kept.push_back(record);
                    }
                }
                break;
            }
            case StageKind::SplitMono: {
                auto [src_rec, tgt_rec] = split_pair_to_mono(std::get<SentencePair>(record));
                result.kept.emplace_back(std::move(src_rec));
                result.kept.emplace_back(std::move(tgt_rec));
                break;
            }
            case StageKind::Tag: {
                const auto& pair = std::get<SentencePair>(record);
                const TaggedPair tagged = tag_for_training(pair);
                result.kept.emplace_back(SentencePair::make(pair.src_lang, pair.tgt_lang,
                                                            tagged.encoder_input,
                                                            tagged.decoder_input, pair.scores));
                result.modified = true;
                break;
            }
            default:
                throw Error(ErrorCode::ConfigInvalid, "stage is not stateless");
        }
    } catch (const Error&) {
        // Per-record failures never abort the run.
        result.kept.clear();
        result.reason = DropReason::MalformedLine;
        result.modified = false;
    }
    return result;
}

class PipelineRun {
  public:
    PipelineRun(const PipelineConfig& config, const LanguageIdentifier* identifier)
        : config_(config), identifier_(identifier), echo_(),
          dropped_(config_.dropped_out, config_.columns, config_.mono_columns) {
        parse_stage_.name = "parse";
        if (config_.langid.mode == "echo" && identifier_ == nullptr) identifier_ = &echo_;
        if (config_.langid.mode == "scores") identifier_ = nullptr;

        for (const StageKind kind : config_.stages) {
            StageState state;
            state.kind = kind;
            state.report.name = std::string(stage_name(kind));
            switch (kind) {
                case StageKind::DedupExact:
                    state.exact_deduper.emplace(
                        BloomFilter(config_.dedup.capacity, config_.dedup.fp_rate, config_.seed));
                    break;
                case StageKind::DedupInconsistent:
                    if (config_.dedup.inconsistent_backend == "bloom") {
                        state.inconsistent_deduper.emplace(config_.dedup.capacity,
                                                           config_.dedup.fp_rate,
                                                           config_.seed + 1);
                    } else {
                        state.inconsistent_deduper.emplace();
                    }
                    break;
                case StageKind::Shuffle: break;
                default: state.stateless = true;
            }
            stages_.push_back(std::move(state));
        }
    }

    RunReport run() {
        const auto start = Clock::now();
        config_.validate();

        // Split the stage list into segments at shuffle boundaries; each
        // shuffle materializes its input and reorders it on disk.
        std::vector<std::string> current_inputs = config_.inputs;
        bool reading_temp = false;
        std::size_t stage_begin = 0;
        std::size_t shuffle_ordinal = 0;
        while (true) {
            std::size_t shuffle_at = stage_begin;
            while (shuffle_at < stages_.size() && stages_[shuffle_at].kind != StageKind::Shuffle) {
                ++shuffle_at;
            }
            const bool has_shuffle = shuffle_at < stages_.size();
            const std::string segment_out = has_shuffle ? make_temp_path() : config_.output;

            run_segment(current_inputs, reading_temp, stage_begin, shuffle_at, segment_out,
                        /*is_final=*/!has_shuffle);
            if (!has_shuffle) break;

            const bool shuffle_is_last = shuffle_at + 1 >= stages_.size();
            const std::string shuffle_out = shuffle_is_last ? config_.output : make_temp_path();
            run_shuffle_stage(stages_[shuffle_at], segment_out, shuffle_out,
                              config_.seed + shuffle_ordinal, shuffle_is_last);
            ++shuffle_ordinal;
            if (shuffle_is_last) break;
            current_inputs = {shuffle_out};
            reading_temp = true;
            stage_begin = shuffle_at + 1;
        }

        RunReport report;
        report.seed = config_.seed;
        report.records_in = parse_stage_.input;
        report.records_out = records_out_;
        report.wall_time_s = seconds_since(start);
        finish_stage(parse_stage_);
        report.stages.push_back(parse_stage_);
        for (auto& state : stages_) {
            finish_stage(state.report);
            report.stages.push_back(state.report);
        }
        cleanup_temp_files();
        if (!config_.report_path.empty()) {
            std::ofstream out(config_.report_path, std::ios::binary);
            if (!out) {
                throw Error(ErrorCode::IoError,
                            "cannot open " + config_.report_path + " for writing");
            }
            out << report.to_json();
        }
        return report;
    }

  private:
    static void finish_stage(StageReport& report) {
        report.records_per_s =
            report.wall_time_s > 0 ? static_cast<double>(report.input) / report.wall_time_s : 0.0;
    }

    std::string make_temp_path() {
        const std::string dir = resolve_temp_dir(config_.temp_dir);
        std::string path = dir + "/cprep-" + std::to_string(::getpid()) + "-" +
                           std::to_string(temp_files_.size()) + ".tmp";
        temp_files_.push_back(path);
        return path;
    }

    void cleanup_temp_files() {
        for (const auto& path : temp_files_) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
        temp_files_.clear();
    }

    void run_shuffle_stage(StageState& state, const std::string& in_path,
                           const std::string& out_path, std::uint64_t seed, bool is_final) {
        const auto start = Clock::now();
        ShuffleConfig cfg;
        cfg.num_pointers = config_.shuffle.pointers;
        cfg.buffer_capacity = config_.shuffle.buffer;
        cfg.seed = seed;
        std::error_code ec;
        const auto size = std::filesystem::file_size(in_path, ec);
        if (!ec && size == 0) {
            // Nothing to shuffle; emit an empty file.
            std::ofstream out(out_path, std::ios::binary);
            state.report.wall_time_s += seconds_since(start);
            return;
        }
        const ShuffleStats stats = stream_shuffle_to_file({in_path}, cfg, out_path);
        state.report.input += stats.records;
        state.report.kept += stats.records;
        if (is_final) records_out_ = stats.records;
        state.report.wall_time_s += seconds_since(start);
    }

    void run_segment(const std::vector<std::string>& inputs, bool reading_temp,
                     std::size_t stage_begin, std::size_t stage_end, const std::string& out_path,
                     bool is_final) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Error(ErrorCode::IoError, "cannot open " + out_path + " for writing");

        // The record kind entering this segment.
        bool is_pair = config_.input_kind == InputKind::Pair;
        for (std::size_t s = 0; s < stage_begin; ++s) {
            if (stages_[s].kind == StageKind::SplitMono) is_pair = false;
        }

        for (const auto& input : inputs) {
            std::ifstream in(input, std::ios::binary);
            if (!in) throw Error(ErrorCode::IoError, "cannot open " + input);
            std::string line;
            bool first_line = true;
            std::vector<std::string> chunk;
            chunk.reserve(kChunkSize);
            while (true) {
                chunk.clear();
                while (chunk.size() < kChunkSize && std::getline(in, line)) {
                    if (!line.empty() && line.back() == '\r') line.pop_back();
                    if (first_line) {
                        first_line = false;
                        if (config_.skip_header && !reading_temp) continue;
                    }
                    chunk.push_back(line);
                }
                if (chunk.empty()) break;
                process_chunk(chunk, is_pair, reading_temp, stage_begin, stage_end, out, is_final);
            }
        }
        if (!out) throw Error(ErrorCode::IoError, "short write to " + out_path);
    }

    void process_chunk(const std::vector<std::string>& lines, bool segment_is_pair,
                       bool reading_temp, std::size_t stage_begin, std::size_t stage_end,
                       std::ofstream& out, bool is_final) {
        // Parse. Raw inputs count into the parse pseudo-stage; segment
        // boundaries re-read our own serialized records, which must parse.
        const auto parse_start = Clock::now();
        std::vector<StageResult> parsed(lines.size());
        const auto parse_one = [&](const std::string& text) {
            StageResult result;
            try {
                if (segment_is_pair) {
                    result.kept.emplace_back(parse_bitext_line(text, config_.columns));
                } else if (config_.input_kind == InputKind::MonoPlain && !reading_temp) {
                    result.kept.emplace_back(
                        parse_mono_plain_line(text, LangCode::parse(config_.mono_lang)));
                } else {
                    result.kept.emplace_back(parse_mono_line(text, config_.mono_columns));
                }
            } catch (const Error&) {
                result.reason = DropReason::MalformedLine;
            }
            return result;
        };
        parallel_map_ordered(lines, parsed, parse_one, config_.workers);

        std::vector<Record> records;
        records.reserve(lines.size());
        for (std::size_t i = 0; i < parsed.size(); ++i) {
            if (!reading_temp) {
                parse_stage_.input += 1;
                if (parsed[i].reason) {
                    parse_stage_.dropped[std::string(drop_reason_name(*parsed[i].reason))] += 1;
                    dropped_.write_raw(lines[i], *parsed[i].reason);
                } else {
                    parse_stage_.kept += 1;
                }
            } else if (parsed[i].reason) {
                throw Error(ErrorCode::IoError, "intermediate file is corrupted");
            }
            for (auto& rec : parsed[i].kept) records.push_back(std::move(rec));
        }
        if (!reading_temp) parse_stage_.wall_time_s += seconds_since(parse_start);

        // Stages.
        for (std::size_t s = stage_begin; s < stage_end; ++s) {
            StageState& state = stages_[s];
            const auto stage_start = Clock::now();
            std::vector<Record> next;
            next.reserve(records.size());
            if (state.stateless) {
                std::vector<StageResult> results(records.size());
                const auto apply_one = [&](const Record& record) {
                    return apply_stateless(state.kind, record, config_, identifier_);
                };
                parallel_map_ordered(records, results, apply_one, config_.workers);
                for (std::size_t i = 0; i < results.size(); ++i) {
                    state.report.input += 1;
                    if (results[i].reason) {
                        state.report.dropped[std::string(drop_reason_name(*results[i].reason))] +=
                            1;
                        dropped_.write(records[i], *results[i].reason);
                    } else {
                        state.report.kept += 1;
                        if (results[i].modified) state.report.modified += 1;
                        for (auto& rec : results[i].kept) next.push_back(std::move(rec));
                    }
                }
            } else {
                // Dedup stages keep cross-record state; apply sequentially.
                for (auto& record : records) {
                    state.report.input += 1;
                    std::optional<DropReason> reason;
                    if (state.exact_deduper) {
                        if (std::holds_alternative<SentencePair>(record)) {
                            const auto result =
                                state.exact_deduper->apply(std::get<SentencePair>(record));
                            if (!result.kept()) reason = result.reason();
                        } else {
                            const auto result =
                                state.exact_deduper->apply(std::get<MonoRecord>(record));
                            if (!result.kept()) reason = result.reason();
                        }
                    } else if (state.inconsistent_deduper) {
                        const auto result =
                            state.inconsistent_deduper->apply(std::get<SentencePair>(record));
                        if (!result.kept()) reason = result.reason();
                    }
                    if (reason) {
                        state.report.dropped[std::string(drop_reason_name(*reason))] += 1;
                        dropped_.write(record, *reason);
                    } else {
                        state.report.kept += 1;
                        next.push_back(std::move(record));
                    }
                }
            }
            records.swap(next);
            state.report.wall_time_s += seconds_since(stage_start);
        }

        // Serialize survivors.
        for (const Record& record : records) {
            if (std::holds_alternative<SentencePair>(record)) {
                out << serialize_pair(std::get<SentencePair>(record), config_.columns) << '\n';
            } else {
                out << serialize_mono(std::get<MonoRecord>(record), config_.mono_columns) << '\n';
            }
            if (is_final) ++records_out_;
        }
    }

    static constexpr std::size_t kChunkSize = 8192;

    PipelineConfig config_;
    const LanguageIdentifier* identifier_;
    EchoIdentifier echo_;
    DroppedWriter dropped_;
    std::vector<StageState> stages_;
    StageReport parse_stage_;
    std::uint64_t records_out_ = 0;
    std::vector<std::string> temp_files_;
};

}  // namespace

RunReport run_pipeline(const PipelineConfig& config, const LanguageIdentifier* identifier) {
    PipelineRun run(config, identifier);
    return run.run();
}

}  // namespace cprep
