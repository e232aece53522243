#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cprep {

struct Tensor {
    std::vector<std::uint64_t> shape;
    std::vector<float> values;  // flat, row-major; size == product(shape)

    bool operator==(const Tensor&) const = default;
};

// A named set of float tensors. Container format: magic "CAVG1", u32 tensor
// count, then per tensor u16 name length, name bytes, u8 rank, rank x u64
// dims, raw little-endian f32 data. Metadata is in-memory bookkeeping and
// is not persisted.
struct Checkpoint {
    std::map<std::string, Tensor> tensors;
    std::map<std::string, std::string> metadata;

    bool operator==(const Checkpoint& other) const { return tensors == other.tensors; }
};

Checkpoint load_checkpoint(const std::string& path);
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);

// Elementwise mean of the last `k` checkpoints in file order, accumulated
// in 64-bit floats and rounded once to f32. All selected checkpoints must
// agree on tensor names and shapes. Metadata records k and the sources.
Checkpoint average_checkpoints(const std::vector<std::string>& files, std::size_t k);

}  // namespace cprep
