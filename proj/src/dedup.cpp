#include "cprep/dedup.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "cprep/hash.hpp"

namespace cprep {

namespace {

constexpr char kMagic[4] = {'B', 'L', 'M', '1'};

void write_u32(std::ostream& out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf, 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf, 8);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    if (!in) throw Error(ErrorCode::TruncatedFile, "while reading u32");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

std::uint64_t read_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (!in) throw Error(ErrorCode::TruncatedFile, "while reading u64");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

}  // namespace

BloomFilter::BloomFilter(std::uint64_t capacity, double fp_rate, std::uint64_t seed) {
    if (capacity < 1 || !(fp_rate > 0.0) || !(fp_rate < 1.0)) {
        throw Error(ErrorCode::InvalidParams, "bloom filter needs n >= 1 and 0 < p < 1");
    }
    const double ln2 = std::log(2.0);
    const double m = std::ceil(-static_cast<double>(capacity) * std::log(fp_rate) / (ln2 * ln2));
    capacity_ = capacity;
    num_bits_ = static_cast<std::uint64_t>(m);
    num_hashes_ = static_cast<std::uint32_t>(
        std::max<long long>(1, std::llround(m / static_cast<double>(capacity) * ln2)));
    seed_ = seed;
    bits_.assign((num_bits_ + 7) / 8, 0);
}

void BloomFilter::insert(std::string_view key) {
    const Hash128 h = murmur3_128(key, seed_);
    for (std::uint32_t i = 0; i < num_hashes_; ++i) {
        const std::uint64_t bit = (h.lo + i * h.hi) % num_bits_;
        bits_[bit >> 3] |= static_cast<std::uint8_t>(1u << (bit & 7));
    }
    ++num_inserted_;
}

bool BloomFilter::contains(std::string_view key) const {
    const Hash128 h = murmur3_128(key, seed_);
    for (std::uint32_t i = 0; i < num_hashes_; ++i) {
        const std::uint64_t bit = (h.lo + i * h.hi) % num_bits_;
        if (!(bits_[bit >> 3] & (1u << (bit & 7)))) return false;
    }
    return true;
}

bool BloomFilter::contains_and_insert(std::string_view key) {
    const Hash128 h = murmur3_128(key, seed_);
    bool present = true;
    for (std::uint32_t i = 0; i < num_hashes_; ++i) {
        const std::uint64_t bit = (h.lo + i * h.hi) % num_bits_;
        std::uint8_t& byte = bits_[bit >> 3];
        const std::uint8_t mask = static_cast<std::uint8_t>(1u << (bit & 7));
        if (!(byte & mask)) {
            present = false;
            byte |= mask;
        }
    }
    if (!present) ++num_inserted_;  // only distinct keys raise the load factor
    return present;
}

void BloomFilter::save(std::ostream& out) const {
    out.write(kMagic, 4);
    write_u64(out, num_bits_);
    write_u32(out, num_hashes_);
    write_u64(out, seed_);
    write_u64(out, num_inserted_);
    out.write(reinterpret_cast<const char*>(bits_.data()),
              static_cast<std::streamsize>(bits_.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write while saving bloom filter");
}

BloomFilter BloomFilter::load(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string_view(magic, 4) != std::string_view(kMagic, 4)) {
        throw Error(ErrorCode::BadMagic, "expected BLM1");
    }
    BloomFilter filter;
    filter.num_bits_ = read_u64(in);
    filter.num_hashes_ = read_u32(in);
    filter.seed_ = read_u64(in);
    filter.num_inserted_ = read_u64(in);
    if (filter.num_bits_ < 1 || filter.num_hashes_ < 1) {
        throw Error(ErrorCode::InvalidParams, "bloom header out of range");
    }
    filter.bits_.resize((filter.num_bits_ + 7) / 8);
    in.read(reinterpret_cast<char*>(filter.bits_.data()),
            static_cast<std::streamsize>(filter.bits_.size()));
    if (in.gcount() != static_cast<std::streamsize>(filter.bits_.size())) {
        throw Error(ErrorCode::TruncatedFile, "bloom bit array");
    }
    // The serialized form does not carry the capacity; approximate it from
    // the sizing formula so over_capacity() stays meaningful.
    const double ln2 = std::log(2.0);
    filter.capacity_ = static_cast<std::uint64_t>(
        std::max(1.0, std::floor(static_cast<double>(filter.num_bits_) * ln2 /
                                 std::max(1u, filter.num_hashes_))));
    return filter;
}

void BloomFilter::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    save(out);
}

BloomFilter BloomFilter::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    return load(in);
}

std::string canonical_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
        if (space) {
            if (!out.empty()) pending_space = true;
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

std::string pair_key(const SentencePair& pair) {
    // Tab-joined; text fields cannot contain tabs.
    std::string key = pair.src_lang.str();
    key.push_back('\t');
    key += pair.tgt_lang.str();
    key.push_back('\t');
    key += canonical_text(pair.src);
    key.push_back('\t');
    key += canonical_text(pair.tgt);
    return key;
}

std::string src_key(const SentencePair& pair) { return canonical_text(pair.src); }
std::string tgt_key(const SentencePair& pair) { return canonical_text(pair.tgt); }
std::string mono_key(const MonoRecord& record) { return canonical_text(record.text); }

PairOutcome ExactDeduper::apply(const SentencePair& pair) {
    if (filter_.contains_and_insert(pair_key(pair))) {
        return PairOutcome::drop(DropReason::Duplicate);
    }
    return PairOutcome::keep(pair);
}

MonoOutcome ExactDeduper::apply(const MonoRecord& record) {
    if (filter_.contains_and_insert(mono_key(record))) {
        return MonoOutcome::drop(DropReason::Duplicate);
    }
    return MonoOutcome::keep(record);
}

InconsistentDeduper::InconsistentDeduper(std::uint64_t capacity, double fp_rate,
                                         std::uint64_t seed)
    : use_bloom_(true) {
    side_filters_.emplace_back(capacity, fp_rate, seed);
    side_filters_.emplace_back(capacity, fp_rate, seed + 1);
}

PairOutcome InconsistentDeduper::apply(const SentencePair& pair) {
    const std::string skey = src_key(pair);
    const std::string tkey = tgt_key(pair);

    if (use_bloom_) {
        const bool src_seen = side_filters_[0].contains(skey);
        const bool tgt_seen = side_filters_[1].contains(tkey);
        if (src_seen && tgt_seen) return PairOutcome::drop(DropReason::Duplicate);
        if (src_seen || tgt_seen) return PairOutcome::drop(DropReason::InconsistentTranslation);
        side_filters_[0].insert(skey);
        side_filters_[1].insert(tkey);
        return PairOutcome::keep(pair);
    }

    const auto src_it = tgt_by_src_.find(skey);
    if (src_it != tgt_by_src_.end()) {
        return src_it->second == tkey ? PairOutcome::drop(DropReason::Duplicate)
                                      : PairOutcome::drop(DropReason::InconsistentTranslation);
    }
    if (src_by_tgt_.count(tkey)) {
        // Same target, necessarily a different source.
        return PairOutcome::drop(DropReason::InconsistentTranslation);
    }
    tgt_by_src_.emplace(skey, tkey);
    src_by_tgt_.emplace(tkey, skey);
    return PairOutcome::keep(pair);
}

}  // namespace cprep
