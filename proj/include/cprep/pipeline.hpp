#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cprep/corpus.hpp"
#include "cprep/filters.hpp"
#include "cprep/mdl.hpp"

namespace cprep {

enum class StageKind {
    CleanPair,
    CleanMono,
    Threshold,
    LangId,
    Mdl,
    DedupExact,
    DedupInconsistent,
    SplitMono,
    Tag,
    Shuffle,
};

std::string_view stage_name(StageKind kind);
std::optional<StageKind> stage_from_name(std::string_view name);

enum class InputKind { Pair, Mono, MonoPlain };

struct DedupStageConfig {
    std::uint64_t capacity = 1'000'000;
    double fp_rate = 1e-7;
    std::string inconsistent_backend = "exact";  // exact | bloom
};

struct LangIdStageConfig {
    std::string mode = "echo";  // echo | scores
    double min_confidence = 0.95;
};

struct ShuffleStageConfig {
    std::uint64_t pointers = 16;
    std::uint64_t buffer = 4096;
};

struct PipelineConfig {
    std::vector<std::string> inputs;
    InputKind input_kind = InputKind::Pair;
    std::string mono_lang = "und";  // for mono-plain inputs
    ColumnSpec columns = ColumnSpec::with_default_scores();
    MonoColumnSpec mono_columns = MonoColumnSpec({"lang", "text", "lang_score"});
    bool skip_header = false;

    std::string output;
    std::string dropped_out;  // optional: dropped records + reason column
    std::string report_path;  // optional: JSON report destination

    std::uint64_t seed = 0;
    int workers = 1;
    std::string temp_dir;  // empty: $CPREP_TMPDIR, then $TMPDIR, then /tmp

    std::vector<StageKind> stages;
    RuleConfig clean;
    ScoreThresholds thresholds;
    LangIdStageConfig langid;
    MdlParams mdl;
    DedupStageConfig dedup;
    ShuffleStageConfig shuffle;

    void validate() const;

    // Line-oriented "key = value" tree; later keys win, "input" repeats.
    static PipelineConfig from_file(const std::string& path);
    static PipelineConfig from_text(std::string_view text);
    void apply_override(std::string_view key, std::string_view value);
    static std::string default_config_text();
};

struct StageReport {
    std::string name;
    std::uint64_t input = 0;
    std::uint64_t kept = 0;
    std::uint64_t modified = 0;
    std::map<std::string, std::uint64_t> dropped;
    double wall_time_s = 0.0;
    double records_per_s = 0.0;

    std::uint64_t total_dropped() const;
};

struct RunReport {
    static constexpr int kSchemaVersion = 1;
    std::vector<StageReport> stages;
    std::uint64_t records_in = 0;
    std::uint64_t records_out = 0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;

    std::string to_json() const;  // stable key order
    static RunReport from_json(std::string_view text);
};

// The identifier is injectable for testing; null uses the config's mode
// (echo stub or scored columns).
RunReport run_pipeline(const PipelineConfig& config,
                       const LanguageIdentifier* identifier = nullptr);

// Sums stage counters across reports (stage rows merged by name).
RunReport aggregate_reports(const std::vector<RunReport>& reports);
std::string format_report_table(const RunReport& report);

std::string resolve_temp_dir(const std::string& configured);

}  // namespace cprep
