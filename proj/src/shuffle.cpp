#include "cprep/shuffle.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "cprep/error.hpp"
#include "cprep/rng.hpp"

namespace cprep {

namespace {

std::uint64_t file_size_or_throw(const std::string& path) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot stat " + path);
    return size;
}

// Buffered sequential reader over one shard's byte range.
class ShardReader {
  public:
    explicit ShardReader(const Shard& shard)
        : in_(shard.path, std::ios::binary), pos_(shard.begin), end_(shard.end) {
        if (!in_) throw Error(ErrorCode::IoError, "cannot open " + shard.path);
        in_.seekg(static_cast<std::streamoff>(shard.begin));
    }

    bool exhausted() const { return pos_ >= end_; }

    // Reads the next record; the trailing newline is not included.
    std::string next() {
        std::string record;
        if (!std::getline(in_, record)) {
            throw Error(ErrorCode::IoError, "read failed mid-shard");
        }
        // pos_ may land one past end_ when the file's last record has no
        // trailing newline; anything further means the plan is stale.
        pos_ += record.size() + 1;
        if (pos_ > end_ + 1) throw Error(ErrorCode::IoError, "record crosses shard boundary");
        return record;
    }

  private:
    std::ifstream in_;
    std::uint64_t pos_;
    std::uint64_t end_;
};

}  // namespace

void ShuffleConfig::validate() const {
    if (num_pointers < 1 || buffer_capacity < 1) {
        throw Error(ErrorCode::InvalidParams, "num_pointers and buffer_capacity must be >= 1");
    }
}

ShardPlan plan_shards(const std::string& path, std::uint64_t num_pointers) {
    return plan_shards(std::vector<std::string>{path}, num_pointers);
}

namespace {

// Snaps byte offsets to record starts within one file and emits shards.
void plan_file_shards(const std::string& path, std::uint64_t file_size, std::uint64_t pointers,
                      std::vector<Shard>& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

    std::vector<std::uint64_t> starts{0};
    for (std::uint64_t i = 1; i < pointers; ++i) {
        std::uint64_t target = file_size * i / pointers;
        if (target <= starts.back()) continue;
        in.clear();
        in.seekg(static_cast<std::streamoff>(target - 1));
        // Scan forward to the byte after the next newline.
        std::string dummy;
        std::getline(in, dummy);
        const std::uint64_t snapped = target - 1 + dummy.size() + 1;
        if (snapped < file_size && snapped > starts.back()) starts.push_back(snapped);
    }
    starts.push_back(file_size);
    for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
        out.push_back({path, starts[i], starts[i + 1]});
    }
}

}  // namespace

ShardPlan plan_shards(const std::vector<std::string>& paths, std::uint64_t num_pointers) {
    if (paths.empty()) throw Error(ErrorCode::InvalidParams, "no input files");
    if (num_pointers < 1) throw Error(ErrorCode::InvalidParams, "num_pointers must be >= 1");

    std::vector<std::uint64_t> sizes;
    std::uint64_t total = 0;
    for (const auto& path : paths) {
        sizes.push_back(file_size_or_throw(path));
        total += sizes.back();
    }
    if (total == 0) throw Error(ErrorCode::EmptyFile, "inputs contain no records");

    // Allot pointers by byte share, at least one per non-empty file.
    std::vector<std::uint64_t> allot(paths.size(), 0);
    std::uint64_t used = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (sizes[i] == 0) continue;
        allot[i] = std::max<std::uint64_t>(
            1, num_pointers * sizes[i] / std::max<std::uint64_t>(1, total));
        used += allot[i];
    }
    // Trim any overshoot from the largest allotments.
    while (used > num_pointers) {
        auto it = std::max_element(allot.begin(), allot.end());
        if (*it <= 1) break;
        --*it;
        --used;
    }

    ShardPlan plan;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (sizes[i] == 0) continue;
        plan_file_shards(paths[i], sizes[i], allot[i], plan.shards);
    }
    return plan;
}

ShuffleStats stream_shuffle(const std::vector<std::string>& sources, const ShuffleConfig& cfg,
                            const std::function<void(std::string_view)>& emit) {
    cfg.validate();
    const ShardPlan plan = plan_shards(sources, cfg.num_pointers);

    std::vector<ShardReader> readers;
    readers.reserve(plan.shards.size());
    for (const auto& shard : plan.shards) readers.emplace_back(shard);
    std::vector<std::size_t> active(readers.size());
    std::iota(active.begin(), active.end(), 0);

    Rng rng(cfg.seed);
    ShuffleStats stats;
    stats.shards_used = readers.size();

    std::vector<std::string> buffer;
    buffer.reserve(cfg.buffer_capacity);

    const auto read_one = [&]() {
        while (!active.empty()) {
            const std::size_t slot = static_cast<std::size_t>(rng.below(active.size()));
            ShardReader& reader = readers[active[slot]];
            if (reader.exhausted()) {
                active[slot] = active.back();
                active.pop_back();
                continue;
            }
            std::string record = reader.next();
            if (reader.exhausted()) {
                active[slot] = active.back();
                active.pop_back();
            }
            buffer.push_back(std::move(record));
            return true;
        }
        return false;
    };

    // Initial fill, then one-in-one-out, then drain.
    while (buffer.size() < cfg.buffer_capacity && read_one()) {
    }
    while (!buffer.empty()) {
        const std::size_t pick = static_cast<std::size_t>(rng.below(buffer.size()));
        stats.records += 1;
        stats.bytes += buffer[pick].size() + 1;
        emit(buffer[pick]);
        buffer[pick] = std::move(buffer.back());
        buffer.pop_back();
        if (buffer.size() < cfg.buffer_capacity) read_one();
    }
    return stats;
}

ShuffleStats stream_shuffle_to_file(const std::vector<std::string>& sources,
                                    const ShuffleConfig& cfg, const std::string& out_path) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + out_path + " for writing");
    const ShuffleStats stats = stream_shuffle(sources, cfg, [&](std::string_view record) {
        out.write(record.data(), static_cast<std::streamsize>(record.size()));
        out.put('\n');
    });
    if (!out) throw Error(ErrorCode::IoError, "short write to " + out_path);
    return stats;
}

ShuffleStats static_shuffle(const std::string& in_path, std::uint64_t seed,
                            const std::string& out_path) {
    struct IndexEntry {
        std::uint64_t key;
        std::uint64_t offset;
        std::uint32_t length;  // record bytes, without the newline
    };

    std::vector<IndexEntry> index;
    {
        std::ifstream in(in_path, std::ios::binary);
        if (!in) throw Error(ErrorCode::IoError, "cannot open " + in_path);
        std::string line;
        std::uint64_t offset = 0;
        std::uint64_t record_index = 0;
        while (std::getline(in, line)) {
            index.push_back({keyed_index_hash(seed, record_index),
                             offset, static_cast<std::uint32_t>(line.size())});
            offset += line.size() + 1;
            ++record_index;
        }
    }
    if (index.empty()) throw Error(ErrorCode::EmptyFile, in_path);

    std::sort(index.begin(), index.end(), [](const IndexEntry& a, const IndexEntry& b) {
        return a.key != b.key ? a.key < b.key : a.offset < b.offset;
    });

    std::ifstream in(in_path, std::ios::binary);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + out_path + " for writing");

    ShuffleStats stats;
    std::string record;
    for (const IndexEntry& entry : index) {
        record.resize(entry.length);
        in.seekg(static_cast<std::streamoff>(entry.offset));
        in.read(record.data(), entry.length);
        if (!in) throw Error(ErrorCode::IoError, "short read from " + in_path);
        out.write(record.data(), entry.length);
        out.put('\n');
        stats.records += 1;
        stats.bytes += entry.length + 1;
    }
    stats.shards_used = 1;
    if (!out) throw Error(ErrorCode::IoError, "short write to " + out_path);
    return stats;
}

ShuffleMetrics shuffledness(const std::vector<std::uint64_t>& input_index_by_output_pos) {
    const std::size_t n = input_index_by_output_pos.size();
    std::vector<char> seen(n, 0);
    for (const std::uint64_t idx : input_index_by_output_pos) {
        if (idx >= n || seen[idx]) {
            throw Error(ErrorCode::LengthMismatch, "not a permutation of 0..N-1");
        }
        seen[idx] = 1;
    }
    ShuffleMetrics metrics;
    if (n <= 1) {
        metrics.spearman_rho = 1.0;
        return metrics;
    }
    // Spearman over a permutation: rho = 1 - 6*sum(d^2) / (n(n^2-1)).
    long double sum_sq = 0.0L;
    long double sum_abs = 0.0L;
    for (std::size_t out_pos = 0; out_pos < n; ++out_pos) {
        const long double d = static_cast<long double>(input_index_by_output_pos[out_pos]) -
                              static_cast<long double>(out_pos);
        sum_sq += d * d;
        sum_abs += d < 0 ? -d : d;
    }
    const long double dn = static_cast<long double>(n);
    metrics.spearman_rho = static_cast<double>(1.0L - 6.0L * sum_sq / (dn * (dn * dn - 1.0L)));
    metrics.mean_normalized_displacement = static_cast<double>(sum_abs / dn / dn);
    return metrics;
}

}  // namespace cprep
