#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cprep/corpus.hpp"

namespace cprep {

// Classic Bloom filter sized from (capacity, false-positive rate):
//   m = ceil(-n ln p / (ln 2)^2),  k = max(1, round((m/n) ln 2)).
// The k bit indices come from double hashing over a 128-bit keyed hash:
//   index_i = (h1 + i*h2) mod m.
// No false negatives ever; false positives at roughly the configured rate
// once filled to capacity. Not safe for concurrent writers.
class BloomFilter {
  public:
    BloomFilter(std::uint64_t capacity, double fp_rate, std::uint64_t seed);

    void insert(std::string_view key);
    bool contains(std::string_view key) const;
    // Membership test and insert in one pass; returns the prior state.
    bool contains_and_insert(std::string_view key);

    std::uint64_t bit_count() const { return num_bits_; }
    std::uint32_t hash_count() const { return num_hashes_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t inserted() const { return num_inserted_; }
    std::uint64_t capacity() const { return capacity_; }
    // Inserting beyond capacity degrades the false-positive rate; callers
    // should surface this as a warning, processing continues.
    bool over_capacity() const { return num_inserted_ > capacity_; }

    // Binary state: magic "BLM1", LE u64 m, u32 k, u64 seed, u64 n_inserted,
    // then the bit array (LSB-first within each byte). Bit-exact round-trip.
    void save(std::ostream& out) const;
    static BloomFilter load(std::istream& in);
    void save_file(const std::string& path) const;
    static BloomFilter load_file(const std::string& path);

    // Equality over the serialized state (the capacity is not persisted).
    bool operator==(const BloomFilter& other) const {
        return num_bits_ == other.num_bits_ && num_hashes_ == other.num_hashes_ &&
               seed_ == other.seed_ && num_inserted_ == other.num_inserted_ &&
               bits_ == other.bits_;
    }

  private:
    BloomFilter() = default;

    std::uint64_t capacity_ = 0;
    std::uint64_t num_bits_ = 0;
    std::uint32_t num_hashes_ = 0;
    std::uint64_t seed_ = 0;
    std::uint64_t num_inserted_ = 0;
    std::vector<std::uint8_t> bits_;
};

// Canonical dedup keys: outer whitespace trimmed, inner runs collapsed.
std::string canonical_text(std::string_view text);
std::string pair_key(const SentencePair& pair);
std::string src_key(const SentencePair& pair);
std::string tgt_key(const SentencePair& pair);
std::string mono_key(const MonoRecord& record);

// Keeps the first occurrence of every key; later ones drop as Duplicate.
// A first occurrence may (rarely) be lost to a Bloom false positive.
class ExactDeduper {
  public:
    explicit ExactDeduper(BloomFilter filter) : filter_(std::move(filter)) {}

    PairOutcome apply(const SentencePair& pair);
    MonoOutcome apply(const MonoRecord& record);

    const BloomFilter& filter() const { return filter_; }
    BloomFilter& filter() { return filter_; }

  private:
    BloomFilter filter_;
};

// Removes pairs sharing a source (or target) with an earlier kept pair but
// translated differently; exact repeats drop as Duplicate. Keep-first.
class InconsistentDeduper {
  public:
    // Exact backend: hash maps, zero error. Default.
    InconsistentDeduper() = default;
    // Bloom backend for large corpora: bounded memory, may over-drop at
    // roughly the configured fp rate; the Duplicate/Inconsistent split is
    // approximate (a pair can hit both side filters without being an exact
    // repeat).
    InconsistentDeduper(std::uint64_t capacity, double fp_rate, std::uint64_t seed);

    PairOutcome apply(const SentencePair& pair);

  private:
    bool use_bloom_ = false;
    std::unordered_map<std::string, std::string> tgt_by_src_;
    std::unordered_map<std::string, std::string> src_by_tgt_;
    std::vector<BloomFilter> side_filters_;  // [src, tgt] when Bloom-backed
};

}  // namespace cprep
