#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cprep {

struct ShuffleConfig {
    std::uint64_t num_pointers = 1;    // concurrent read positions
    std::uint64_t buffer_capacity = 1;  // in-memory reservoir size, in records
    std::uint64_t seed = 0;

    void validate() const;
};

struct Shard {
    std::string path;
    std::uint64_t begin = 0;  // byte offset of the first record
    std::uint64_t end = 0;    // one past the last byte
};

struct ShardPlan {
    std::vector<Shard> shards;
};

// Splits one newline-delimited file into up to `num_pointers` contiguous
// byte ranges of near-equal size, boundaries snapped forward to record
// starts. Concatenating the shards reproduces the file exactly.
ShardPlan plan_shards(const std::string& path, std::uint64_t num_pointers);
// Multi-source variant: pointers are allotted to files by byte share
// (at least one each).
ShardPlan plan_shards(const std::vector<std::string>& paths, std::uint64_t num_pointers);

struct ShuffleStats {
    std::uint64_t records = 0;
    std::uint64_t bytes = 0;
    std::uint64_t shards_used = 0;
};

// Streaming shuffle: fill a reservoir of buffer_capacity records by reading
// from a uniformly random non-exhausted shard pointer; once full, emit a
// uniformly random buffered record after each single-record refill, then
// drain. Emits every input record exactly once; fully deterministic for a
// given (sources, config).
ShuffleStats stream_shuffle(const std::vector<std::string>& sources, const ShuffleConfig& cfg,
                            const std::function<void(std::string_view)>& emit);
ShuffleStats stream_shuffle_to_file(const std::vector<std::string>& sources,
                                    const ShuffleConfig& cfg, const std::string& out_path);

// Full static reshuffle: reorders records by ascending keyed hash of the
// record index. Needs disk for the output plus an in-memory index entry
// per record.
ShuffleStats static_shuffle(const std::string& in_path, std::uint64_t seed,
                            const std::string& out_path);

struct ShuffleMetrics {
    double spearman_rho = 0.0;
    double mean_normalized_displacement = 0.0;
};

// Rank statistics of a recorded permutation, given as the input index of
// each emitted record in emission order.
ShuffleMetrics shuffledness(const std::vector<std::uint64_t>& input_index_by_output_pos);

}  // namespace cprep
