// cprep: corpus preparation toolkit for multilingual MT data pipelines.
//
// Subcommands cover heuristic bitext cleaning, repeat-pattern filtering,
// Bloom-filter deduplication, streaming/static shuffling of large
// newline-delimited files, unigram vocabulary merging, checkpoint
// averaging, and language-tag / pivot-route preprocessing.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cprep/ckpt.hpp"
#include "cprep/corpus.hpp"
#include "cprep/pipeline.hpp"
#include "cprep/routing.hpp"
#include "cprep/shuffle.hpp"
#include "cprep/vocab.hpp"

namespace {

using nlohmann::ordered_json;

struct PipelineCliFlags {
    std::vector<std::string> inputs;
    std::string output;
    std::string dropped_out;
    std::string report_path;
    std::string columns;
    std::string mono_columns;
    std::string input_kind;
    std::string mono_lang;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    int workers = 1;
    bool skip_header = false;
};

void add_pipeline_io_flags(CLI::App* cmd, PipelineCliFlags& flags) {
    cmd->add_option("-i,--in", flags.inputs, "input file(s)");
    cmd->add_option("-o,--out", flags.output, "output file");
    cmd->add_option("--dropped-out", flags.dropped_out,
                    "write dropped records with the reason as a final column");
    cmd->add_option("--report", flags.report_path, "write the JSON run report here");
    cmd->add_option("--columns", flags.columns, "bitext column order (comma separated)");
    cmd->add_option("--mono-columns", flags.mono_columns, "mono column order");
    cmd->add_option("--kind", flags.input_kind, "input kind: pair | mono | mono-plain");
    cmd->add_option("--lang", flags.mono_lang, "language code for mono-plain inputs");
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--workers", flags.workers, "worker threads for stateless stages");
    cmd->add_flag("--skip-header", flags.skip_header, "skip one header row per input");
    cmd->add_option("--set", flags.sets, "override any config key, e.g. --set clean.min_chars=25");
}

void apply_flags(const CLI::App* cmd, cprep::PipelineConfig& config,
                 const PipelineCliFlags& flags) {
    for (const auto& input : flags.inputs) config.inputs.push_back(input);
    if (!flags.output.empty()) config.output = flags.output;
    if (!flags.dropped_out.empty()) config.dropped_out = flags.dropped_out;
    if (!flags.report_path.empty()) config.report_path = flags.report_path;
    if (!flags.columns.empty()) config.columns = cprep::ColumnSpec::parse(flags.columns);
    if (!flags.mono_columns.empty()) {
        config.mono_columns = cprep::MonoColumnSpec::parse(flags.mono_columns);
    }
    if (!flags.input_kind.empty()) config.apply_override("input_kind", flags.input_kind);
    if (!flags.mono_lang.empty()) config.mono_lang = flags.mono_lang;
    if (cmd->count("--seed")) config.seed = flags.seed;
    if (cmd->count("--workers")) config.workers = flags.workers;
    if (cmd->count("--skip-header")) config.skip_header = flags.skip_header;
    for (const auto& kv : flags.sets) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            throw cprep::Error(cprep::ErrorCode::ConfigInvalid,
                               "--set expects key=value, got '" + kv + "'");
        }
        config.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
    }
}

int run_and_report(cprep::PipelineConfig& config) {
    const cprep::RunReport report = cprep::run_pipeline(config);
    std::cout << cprep::format_report_table(report);
    return 0;
}

ordered_json route_to_json(cprep::LangCode src, cprep::LangCode tgt, const cprep::Route& route) {
    ordered_json doc;
    doc["src"] = src.str();
    doc["tgt"] = tgt.str();
    if (route.kind == cprep::Route::Kind::Direct) {
        doc["route"] = "direct";
    } else {
        doc["route"] = "pivot";
        doc["via"] = route.via->str();
    }
    return doc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cprep: corpus preparation toolkit for multilingual MT data pipelines"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "run a configured pipeline");
    std::string config_path;
    std::string stages_csv;
    bool dump_defaults = false;
    PipelineCliFlags run_flags;
    run_cmd->add_option("-c,--config", config_path, "pipeline config file");
    run_cmd->add_option("--stages", stages_csv, "comma-separated stage list");
    run_cmd->add_flag("--dump-default-config", dump_defaults,
                      "print the default configuration and exit");
    add_pipeline_io_flags(run_cmd, run_flags);

    // --- clean -------------------------------------------------------------
    auto* clean_cmd = app.add_subcommand("clean", "heuristic rule cleaning");
    PipelineCliFlags clean_flags;
    struct {
        int min_chars = 30;
        int max_word_chars = 100;
        double min_laser = 1.06;
        double min_lang_score = 0.95;
        bool with_threshold = false;
    } clean_opts;
    add_pipeline_io_flags(clean_cmd, clean_flags);
    clean_cmd->add_option("--min-chars", clean_opts.min_chars, "minimum sentence length");
    clean_cmd->add_option("--max-word-chars", clean_opts.max_word_chars, "longest allowed token");
    clean_cmd->add_flag("--with-threshold", clean_opts.with_threshold,
                        "also apply laser/language score thresholds");
    clean_cmd->add_option("--min-laser", clean_opts.min_laser, "laser score threshold");
    clean_cmd->add_option("--min-lang-score", clean_opts.min_lang_score,
                          "language score threshold");

    // --- mdl-filter ----------------------------------------------------------
    auto* mdl_cmd = app.add_subcommand("mdl-filter", "repeat-pattern filtering");
    PipelineCliFlags mdl_flags;
    struct {
        double c = 2.0;
        double t = 2.0;
        int max_candidate_len = 20;
    } mdl_opts;
    add_pipeline_io_flags(mdl_cmd, mdl_flags);
    mdl_cmd->add_option("--mdl-c", mdl_opts.c, "codebook weight");
    mdl_cmd->add_option("--mdl-t", mdl_opts.t, "noise threshold on bits per character");
    mdl_cmd->add_option("--mdl-max-candidate-len", mdl_opts.max_candidate_len,
                        "longest candidate coding entry");

    // --- dedup ---------------------------------------------------------------
    auto* dedup_cmd = app.add_subcommand("dedup", "bloom / inconsistent deduplication");
    PipelineCliFlags dedup_flags;
    struct {
        std::string mode = "exact";
        std::uint64_t capacity = 1'000'000;
        double fp_rate = 1e-7;
        std::string backend = "exact";
        std::string save_filter;
    } dedup_opts;
    add_pipeline_io_flags(dedup_cmd, dedup_flags);
    dedup_cmd->add_option("--mode", dedup_opts.mode, "exact | inconsistent | both");
    dedup_cmd->add_option("--capacity", dedup_opts.capacity, "expected distinct records");
    dedup_cmd->add_option("--fp-rate", dedup_opts.fp_rate, "target false-positive rate");
    dedup_cmd->add_option("--backend", dedup_opts.backend,
                          "inconsistent-dedup backend: exact | bloom");

    // --- split-mono ------------------------------------------------------------
    auto* split_cmd = app.add_subcommand("split-mono", "split pairs into monolingual records");
    PipelineCliFlags split_flags;
    add_pipeline_io_flags(split_cmd, split_flags);

    // --- shuffle -----------------------------------------------------------
    auto* shuffle_cmd = app.add_subcommand("shuffle", "streaming multi-source shuffle");
    struct {
        std::vector<std::string> inputs;
        std::string output;
        std::uint64_t pointers = 16;
        std::uint64_t buffer = 4096;
        std::uint64_t seed = 0;
    } shuffle_opts;
    shuffle_cmd->add_option("-i,--in", shuffle_opts.inputs, "input file(s)")->required();
    shuffle_cmd->add_option("-o,--out", shuffle_opts.output, "output file")->required();
    shuffle_cmd->add_option("-p,--pointers", shuffle_opts.pointers, "number of file pointers");
    shuffle_cmd->add_option("-b,--buffer", shuffle_opts.buffer, "buffer capacity in records");
    shuffle_cmd->add_option("--seed", shuffle_opts.seed, "random seed");

    // --- static-shuffle ------------------------------------------------------
    auto* static_cmd = app.add_subcommand("static-shuffle", "full on-disk reshuffle");
    struct {
        std::string input;
        std::string output;
        std::uint64_t seed = 0;
    } static_opts;
    static_cmd->add_option("-i,--in", static_opts.input, "input file")->required();
    static_cmd->add_option("-o,--out", static_opts.output, "output file")->required();
    static_cmd->add_option("--seed", static_opts.seed, "random seed");

    // --- vocab-merge -----------------------------------------------------------
    auto* vmerge_cmd = app.add_subcommand("vocab-merge", "merge a new unigram vocab into an old one");
    struct {
        std::string old_path;
        std::string new_path;
        std::string out_path;
        double delta = 10.0;
    } vmerge_opts;
    vmerge_cmd->add_option("--old", vmerge_opts.old_path, "old vocabulary file")->required();
    vmerge_cmd->add_option("--new", vmerge_opts.new_path, "new vocabulary file")->required();
    vmerge_cmd->add_option("--out", vmerge_opts.out_path, "merged vocabulary file")->required();
    vmerge_cmd->add_option("--delta", vmerge_opts.delta, "log-space penalty for new pieces");

    // --- vocab-verify ---------------------------------------------------------
    auto* vverify_cmd =
        app.add_subcommand("vocab-verify", "check old-language segmentation invariance");
    struct {
        std::string old_path;
        std::string merged_path;
        std::string corpus_path;
        double unk_logprob = -20.0;
    } vverify_opts;
    vverify_cmd->add_option("--old", vverify_opts.old_path, "old vocabulary file")->required();
    vverify_cmd->add_option("--merged", vverify_opts.merged_path, "merged vocabulary file")
        ->required();
    vverify_cmd->add_option("--corpus", vverify_opts.corpus_path, "text corpus, one line each")
        ->required();
    vverify_cmd->add_option("--unk-logprob", vverify_opts.unk_logprob,
                            "per-character unknown fallback log-probability");

    // --- avg-ckpt -------------------------------------------------------------
    auto* avg_cmd = app.add_subcommand("avg-ckpt", "average the last K checkpoints");
    struct {
        std::vector<std::string> files;
        std::string out_path;
        std::size_t k = 10;
        bool no_sort = false;
    } avg_opts;
    avg_cmd->add_option("files", avg_opts.files, "checkpoint files")->required();
    avg_cmd->add_option("-o,--out", avg_opts.out_path, "output checkpoint")->required();
    avg_cmd->add_option("-k", avg_opts.k, "number of trailing checkpoints to average");
    avg_cmd->add_flag("--no-sort", avg_opts.no_sort, "keep the given file order");

    // --- route ------------------------------------------------------------------
    auto* route_cmd = app.add_subcommand("route", "plan a translation route");
    struct {
        std::string src;
        std::string tgt;
        std::string table_path;
        std::string pivot = "eng";
        std::vector<std::string> hubs = {"eng", "fra"};
    } route_opts;
    route_cmd->add_option("--src", route_opts.src, "source language")->required();
    route_cmd->add_option("--tgt", route_opts.tgt, "target language")->required();
    route_cmd->add_option("--table", route_opts.table_path, "override table (TSV)");
    route_cmd->add_option("--pivot", route_opts.pivot, "pivot language");
    route_cmd->add_option("--hubs", route_opts.hubs, "hub languages");

    // --- tag ----------------------------------------------------------------------
    auto* tag_cmd = app.add_subcommand("tag", "emit encoder/decoder inputs with language tokens");
    struct {
        std::string input;
        std::string output;
        std::string columns;
    } tag_opts;
    tag_cmd->add_option("-i,--in", tag_opts.input, "bitext input")->required();
    tag_cmd->add_option("-o,--out", tag_opts.output, "two-column output")->required();
    tag_cmd->add_option("--columns", tag_opts.columns, "bitext column order");

    // --- stats -------------------------------------------------------------------
    auto* stats_cmd = app.add_subcommand("stats", "aggregate run reports");
    struct {
        std::vector<std::string> reports;
        bool json_only = false;
    } stats_opts;
    stats_cmd->add_option("reports", stats_opts.reports, "report JSON files")->required();
    stats_cmd->add_flag("--json", stats_opts.json_only, "print JSON only");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            if (dump_defaults) {
                std::cout << cprep::PipelineConfig::default_config_text();
                return 0;
            }
            cprep::PipelineConfig config = config_path.empty()
                                               ? cprep::PipelineConfig()
                                               : cprep::PipelineConfig::from_file(config_path);
            if (!stages_csv.empty()) config.apply_override("stages", stages_csv);
            apply_flags(run_cmd, config, run_flags);
            return run_and_report(config);
        }

        if (clean_cmd->parsed()) {
            cprep::PipelineConfig config;
            apply_flags(clean_cmd, config, clean_flags);
            config.clean.min_chars = clean_opts.min_chars;
            config.clean.max_word_chars = clean_opts.max_word_chars;
            config.thresholds.min_laser = clean_opts.min_laser;
            config.thresholds.min_lang_score = clean_opts.min_lang_score;
            const bool mono = config.input_kind != cprep::InputKind::Pair;
            config.stages = {mono ? cprep::StageKind::CleanMono : cprep::StageKind::CleanPair};
            if (clean_opts.with_threshold) config.stages.push_back(cprep::StageKind::Threshold);
            return run_and_report(config);
        }

        if (mdl_cmd->parsed()) {
            cprep::PipelineConfig config;
            apply_flags(mdl_cmd, config, mdl_flags);
            config.mdl.codebook_weight = mdl_opts.c;
            config.mdl.noise_threshold = mdl_opts.t;
            config.mdl.max_candidate_len = mdl_opts.max_candidate_len;
            config.stages = {cprep::StageKind::Mdl};
            return run_and_report(config);
        }

        if (dedup_cmd->parsed()) {
            cprep::PipelineConfig config;
            apply_flags(dedup_cmd, config, dedup_flags);
            config.dedup.capacity = dedup_opts.capacity;
            config.dedup.fp_rate = dedup_opts.fp_rate;
            config.dedup.inconsistent_backend = dedup_opts.backend;
            if (dedup_opts.mode == "exact") {
                config.stages = {cprep::StageKind::DedupExact};
            } else if (dedup_opts.mode == "inconsistent") {
                config.stages = {cprep::StageKind::DedupInconsistent};
            } else if (dedup_opts.mode == "both") {
                config.stages = {cprep::StageKind::DedupExact,
                                 cprep::StageKind::DedupInconsistent};
            } else {
                throw cprep::Error(cprep::ErrorCode::ConfigInvalid,
                                   "--mode must be exact, inconsistent or both");
            }
            return run_and_report(config);
        }

        if (split_cmd->parsed()) {
            cprep::PipelineConfig config;
            apply_flags(split_cmd, config, split_flags);
            config.stages = {cprep::StageKind::SplitMono};
            return run_and_report(config);
        }

        if (shuffle_cmd->parsed()) {
            cprep::ShuffleConfig cfg;
            cfg.num_pointers = shuffle_opts.pointers;
            cfg.buffer_capacity = shuffle_opts.buffer;
            cfg.seed = shuffle_opts.seed;
            const auto t0 = std::chrono::steady_clock::now();
            const cprep::ShuffleStats stats =
                cprep::stream_shuffle_to_file(shuffle_opts.inputs, cfg, shuffle_opts.output);
            const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                  .count();
            ordered_json doc;
            doc["records"] = stats.records;
            doc["bytes"] = stats.bytes;
            doc["shards"] = stats.shards_used;
            doc["pointers"] = cfg.num_pointers;
            doc["buffer"] = cfg.buffer_capacity;
            doc["seed"] = cfg.seed;
            doc["wall_time_s"] = dt;
            doc["records_per_s"] = dt > 0 ? stats.records / dt : 0.0;
            std::cout << doc.dump() << "\n";
            return 0;
        }

        if (static_cmd->parsed()) {
            const auto t0 = std::chrono::steady_clock::now();
            const cprep::ShuffleStats stats =
                cprep::static_shuffle(static_opts.input, static_opts.seed, static_opts.output);
            const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                  .count();
            ordered_json doc;
            doc["records"] = stats.records;
            doc["bytes"] = stats.bytes;
            doc["seed"] = static_opts.seed;
            doc["wall_time_s"] = dt;
            doc["records_per_s"] = dt > 0 ? stats.records / dt : 0.0;
            std::cout << doc.dump() << "\n";
            return 0;
        }

        if (vmerge_cmd->parsed()) {
            const auto old_vocab = cprep::UnigramVocab::load_file(vmerge_opts.old_path);
            const auto new_vocab = cprep::UnigramVocab::load_file(vmerge_opts.new_path);
            cprep::MergeConfig cfg;
            cfg.delta = vmerge_opts.delta;
            const auto merged = cprep::merge_vocab(old_vocab, new_vocab, cfg);
            merged.save_file(vmerge_opts.out_path);
            std::cerr << "merged " << old_vocab.size() << " old + " << new_vocab.size()
                      << " new pieces -> " << merged.size() << "\n";
            return 0;
        }

        if (vverify_cmd->parsed()) {
            const auto old_vocab = cprep::UnigramVocab::load_file(vverify_opts.old_path);
            const auto merged = cprep::UnigramVocab::load_file(vverify_opts.merged_path);
            std::ifstream corpus(vverify_opts.corpus_path, std::ios::binary);
            if (!corpus) {
                throw cprep::Error(cprep::ErrorCode::IoError,
                                   "cannot open " + vverify_opts.corpus_path);
            }
            const auto report = cprep::verify_invariance(
                [&](std::string& line) { return static_cast<bool>(std::getline(corpus, line)); },
                old_vocab, merged, vverify_opts.unk_logprob);
            ordered_json doc;
            doc["checked"] = report.checked;
            doc["skipped"] = report.skipped;
            doc["mismatches"] = report.mismatches;
            doc["examples"] = report.examples;
            std::cout << doc.dump(2) << "\n";
            return report.mismatches == 0 ? 0 : 2;
        }

        if (avg_cmd->parsed()) {
            std::vector<std::string> files = avg_opts.files;
            if (!avg_opts.no_sort) std::sort(files.begin(), files.end());
            const cprep::Checkpoint avg = cprep::average_checkpoints(files, avg_opts.k);
            cprep::save_checkpoint(avg, avg_opts.out_path);
            ordered_json doc;
            doc["k"] = avg_opts.k;
            doc["tensors"] = avg.tensors.size();
            doc["sources"] = avg.metadata.at("sources");
            doc["out"] = avg_opts.out_path;
            std::cout << doc.dump() << "\n";
            return 0;
        }

        if (route_cmd->parsed()) {
            std::set<cprep::LangCode> hubs;
            for (const auto& hub : route_opts.hubs) hubs.insert(cprep::LangCode::parse(hub));
            cprep::RoutingTable table(cprep::LangCode::parse(route_opts.pivot), hubs);
            if (!route_opts.table_path.empty()) {
                table.merge_overrides_from_file(route_opts.table_path);
            }
            const auto src = cprep::LangCode::parse(route_opts.src);
            const auto tgt = cprep::LangCode::parse(route_opts.tgt);
            std::cout << route_to_json(src, tgt, table.plan(src, tgt)).dump() << "\n";
            return 0;
        }

        if (tag_cmd->parsed()) {
            const cprep::ColumnSpec columns = tag_opts.columns.empty()
                                                  ? cprep::ColumnSpec::with_default_scores()
                                                  : cprep::ColumnSpec::parse(tag_opts.columns);
            std::ifstream in(tag_opts.input, std::ios::binary);
            if (!in) {
                throw cprep::Error(cprep::ErrorCode::IoError, "cannot open " + tag_opts.input);
            }
            std::ofstream out(tag_opts.output, std::ios::binary);
            if (!out) {
                throw cprep::Error(cprep::ErrorCode::IoError,
                                   "cannot open " + tag_opts.output + " for writing");
            }
            std::string line;
            std::uint64_t tagged_count = 0;
            std::uint64_t skipped = 0;
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                try {
                    const auto pair = cprep::parse_bitext_line(line, columns);
                    const auto tagged = cprep::tag_for_training(pair);
                    out << tagged.encoder_input << '\t' << tagged.decoder_input << '\n';
                    ++tagged_count;
                } catch (const cprep::Error&) {
                    ++skipped;
                }
            }
            std::cerr << "tagged " << tagged_count << " pairs, skipped " << skipped << "\n";
            return 0;
        }

        if (stats_cmd->parsed()) {
            std::vector<cprep::RunReport> reports;
            for (const auto& path : stats_opts.reports) {
                std::ifstream in(path, std::ios::binary);
                if (!in) throw cprep::Error(cprep::ErrorCode::IoError, "cannot open " + path);
                std::ostringstream buf;
                buf << in.rdbuf();
                reports.push_back(cprep::RunReport::from_json(buf.str()));
            }
            const cprep::RunReport total = cprep::aggregate_reports(reports);
            if (!stats_opts.json_only) std::cout << cprep::format_report_table(total);
            std::cout << total.to_json();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "cprep: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
