#include "cprep/shuffle.hpp"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "cprep/error.hpp"

using namespace cprep;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("cprep_shuffle_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_records(const std::string& path, std::uint64_t count, const std::string& prefix = "") {
    std::ofstream out(path, std::ios::binary);
    for (std::uint64_t i = 0; i < count; ++i) out << prefix << i << "\n";
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> collect_shuffle(const std::vector<std::string>& sources,
                                         const ShuffleConfig& cfg) {
    std::vector<std::string> out;
    stream_shuffle(sources, cfg, [&](std::string_view rec) { out.emplace_back(rec); });
    return out;
}

}  // namespace

TEST_CASE("plan_shards covers the file exactly once") {
    TempDir dir;
    const std::string path = dir.file("data.txt");
    write_records(path, 100, "record-");

    const ShardPlan plan = plan_shards(path, 4);
    CHECK(plan.shards.size() == 4);

    // Byte-compare oracle: concatenated shard ranges == whole file.
    const std::string whole = read_all(path);
    std::string joined;
    std::uint64_t prev_end = 0;
    for (const auto& shard : plan.shards) {
        CHECK(shard.begin == prev_end);
        prev_end = shard.end;
        joined += whole.substr(shard.begin, shard.end - shard.begin);
        // Each shard starts at a record boundary.
        if (shard.begin > 0) CHECK(whole[shard.begin - 1] == '\n');
    }
    CHECK(prev_end == whole.size());
    CHECK(joined == whole);

    // Near-equal record counts per shard.
    for (const auto& shard : plan.shards) {
        const auto slice = whole.substr(shard.begin, shard.end - shard.begin);
        const auto records = std::count(slice.begin(), slice.end(), '\n');
        CHECK(records >= 20);
        CHECK(records <= 30);
    }
}

TEST_CASE("plan_shards degenerates gracefully") {
    TempDir dir;
    const std::string path = dir.file("tiny.txt");
    write_records(path, 3);
    const ShardPlan plan = plan_shards(path, 10);
    CHECK(plan.shards.size() <= 3);
    std::uint64_t total = 0;
    for (const auto& shard : plan.shards) total += shard.end - shard.begin;
    CHECK(total == std::filesystem::file_size(path));

    const std::string empty = dir.file("empty.txt");
    std::ofstream(empty).close();
    CHECK_THROWS_AS(plan_shards(empty, 4), Error);
}

TEST_CASE("stream_shuffle with one pointer and unit buffer is the identity") {
    TempDir dir;
    const std::string path = dir.file("in.txt");
    write_records(path, 10);
    ShuffleConfig cfg;
    cfg.num_pointers = 1;
    cfg.buffer_capacity = 1;
    cfg.seed = 12345;
    const auto out = collect_shuffle({path}, cfg);
    REQUIRE(out.size() == 10);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == std::to_string(i));
}

TEST_CASE("stream_shuffle emits a deterministic permutation") {
    TempDir dir;
    const std::string path = dir.file("in.txt");
    write_records(path, 10);
    ShuffleConfig cfg;
    cfg.num_pointers = 2;
    cfg.buffer_capacity = 4;
    cfg.seed = 42;
    const auto first = collect_shuffle({path}, cfg);
    const auto second = collect_shuffle({path}, cfg);
    CHECK(first == second);

    auto sorted = first;
    std::sort(sorted.begin(), sorted.end());
    auto expected = read_lines(path);
    std::sort(expected.begin(), expected.end());
    CHECK(sorted == expected);
}

TEST_CASE("stream_shuffle output multiset equals input multiset across configs") {
    TempDir dir;
    const std::string a = dir.file("a.txt");
    const std::string b = dir.file("b.txt");
    write_records(a, 700, "a-");
    write_records(b, 300, "b-");
    auto expected = read_lines(a);
    for (auto& line : read_lines(b)) expected.push_back(line);
    std::sort(expected.begin(), expected.end());

    std::mt19937_64 gen(8);
    std::uniform_int_distribution<std::uint64_t> pointers(1, 40);
    std::uniform_int_distribution<std::uint64_t> buffer(1, 200);
    for (int trial = 0; trial < 8; ++trial) {
        ShuffleConfig cfg;
        cfg.num_pointers = pointers(gen);
        cfg.buffer_capacity = buffer(gen);
        cfg.seed = gen();
        auto out = collect_shuffle({a, b}, cfg);
        std::sort(out.begin(), out.end());
        CHECK(out == expected);
    }
}

TEST_CASE("stream_shuffle_to_file writes newline-terminated records") {
    TempDir dir;
    const std::string in = dir.file("in.txt");
    const std::string out = dir.file("out.txt");
    write_records(in, 50);
    ShuffleConfig cfg;
    cfg.num_pointers = 4;
    cfg.buffer_capacity = 8;
    cfg.seed = 7;
    const ShuffleStats stats = stream_shuffle_to_file({in}, cfg, out);
    CHECK(stats.records == 50);
    CHECK(stats.bytes == std::filesystem::file_size(in));
    CHECK(read_lines(out).size() == 50);
}

TEST_CASE("static_shuffle is a deterministic seed-keyed permutation") {
    TempDir dir;
    const std::string in = dir.file("in.txt");
    write_records(in, 500);

    const std::string out1 = dir.file("out1.txt");
    const std::string out2 = dir.file("out2.txt");
    static_shuffle(in, 99, out1);
    static_shuffle(in, 99, out2);
    CHECK(read_all(out1) == read_all(out2));

    auto sorted = read_lines(out1);
    std::sort(sorted.begin(), sorted.end());
    auto expected = read_lines(in);
    std::sort(expected.begin(), expected.end());
    CHECK(sorted == expected);

    // Different seeds give different orders (100 seed pairs).
    int differing = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::string path_a = dir.file("sa.txt");
        const std::string path_b = dir.file("sb.txt");
        static_shuffle(in, seed, path_a);
        static_shuffle(in, seed + 1000, path_b);
        if (read_all(path_a) != read_all(path_b)) ++differing;
    }
    CHECK(differing == 100);

    const std::string empty = dir.file("empty.txt");
    std::ofstream(empty).close();
    CHECK_THROWS_AS(static_shuffle(empty, 1, dir.file("never.txt")), Error);
}

TEST_CASE("shuffledness metrics recognize order and disorder") {
    std::vector<std::uint64_t> identity(100);
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
    const auto id_metrics = shuffledness(identity);
    CHECK(id_metrics.spearman_rho == doctest::Approx(1.0));
    CHECK(id_metrics.mean_normalized_displacement == doctest::Approx(0.0));

    auto reversed = identity;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(shuffledness(reversed).spearman_rho == doctest::Approx(-1.0));

    CHECK_THROWS_AS(shuffledness({0, 0, 1}), Error);
    CHECK_THROWS_AS(shuffledness({0, 5}), Error);
}

TEST_CASE("bigger buffers shuffle harder at fixed pointers") {
    TempDir dir;
    const std::string path = dir.file("in.txt");
    const std::uint64_t n = 5000;
    {
        // Fixed-width records so byte-equal shards hold equal record counts.
        std::ofstream out(path, std::ios::binary);
        for (std::uint64_t i = 0; i < n; ++i) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%06llu", static_cast<unsigned long long>(i));
            out << buf << "\n";
        }
    }

    const auto mean_abs_rho = [&](std::uint64_t buffer_records) {
        double total = 0.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            ShuffleConfig cfg;
            cfg.num_pointers = 2;
            cfg.buffer_capacity = buffer_records;
            cfg.seed = seed;
            std::vector<std::uint64_t> perm;
            perm.reserve(n);
            stream_shuffle({path}, cfg, [&](std::string_view rec) {
                perm.push_back(std::stoull(std::string(rec)));
            });
            total += std::abs(shuffledness(perm).spearman_rho);
        }
        return total / 5.0;
    };

    const double small = mean_abs_rho(10);
    const double large = mean_abs_rho(1000);
    CHECK(large < small);
}
