#include "cprep/ckpt.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "cprep/error.hpp"

namespace cprep {

namespace {

constexpr char kMagic[5] = {'C', 'A', 'V', 'G', '1'};

template <typename T>
void write_le(std::ostream& out, T value) {
    char buf[sizeof(T)];
    std::uint64_t v;
    if constexpr (sizeof(T) == 4 && std::is_floating_point_v<T>) {
        std::uint32_t raw;
        std::memcpy(&raw, &value, 4);
        v = raw;
    } else {
        v = static_cast<std::uint64_t>(value);
    }
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf, sizeof(T));
}

std::uint64_t read_le(std::istream& in, std::size_t bytes, const char* what) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(bytes));
    if (in.gcount() != static_cast<std::streamsize>(bytes)) {
        throw Error(ErrorCode::TruncatedFile, what);
    }
    std::uint64_t v = 0;
    for (std::size_t i = bytes; i-- > 0;) v = (v << 8) | buf[i];
    return v;
}

}  // namespace

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

    char magic[5];
    in.read(magic, 5);
    if (in.gcount() != 5 || std::string_view(magic, 5) != std::string_view(kMagic, 5)) {
        throw Error(ErrorCode::BadMagic, path + ": expected CAVG1");
    }

    Checkpoint ckpt;
    const auto count = static_cast<std::uint32_t>(read_le(in, 4, "tensor count"));
    for (std::uint32_t t = 0; t < count; ++t) {
        const auto name_len = static_cast<std::uint16_t>(read_le(in, 2, "name length"));
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        if (in.gcount() != name_len) throw Error(ErrorCode::TruncatedFile, "tensor name");

        Tensor tensor;
        const auto rank = static_cast<std::uint8_t>(read_le(in, 1, "rank"));
        std::uint64_t elements = 1;
        for (std::uint8_t d = 0; d < rank; ++d) {
            tensor.shape.push_back(read_le(in, 8, "dimension"));
            if (tensor.shape.back() == 0) {
                throw Error(ErrorCode::ShapeMismatch, name + ": zero dimension");
            }
            elements *= tensor.shape.back();
        }
        tensor.values.resize(elements);
        for (std::uint64_t i = 0; i < elements; ++i) {
            const auto raw = static_cast<std::uint32_t>(read_le(in, 4, "tensor data"));
            float f;
            std::memcpy(&f, &raw, 4);
            tensor.values[i] = f;
        }
        if (ckpt.tensors.count(name)) {
            throw Error(ErrorCode::ShapeMismatch, "duplicate tensor name " + name);
        }
        ckpt.tensors.emplace(std::move(name), std::move(tensor));
    }
    return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");

    out.write(kMagic, 5);
    write_le(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
    for (const auto& [name, tensor] : ckpt.tensors) {
        std::uint64_t elements = 1;
        for (std::uint64_t dim : tensor.shape) elements *= dim;
        if (elements != tensor.values.size()) {
            throw Error(ErrorCode::ShapeMismatch, name + ": values do not match shape");
        }
        write_le(out, static_cast<std::uint16_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_le(out, static_cast<std::uint8_t>(tensor.shape.size()));
        for (std::uint64_t dim : tensor.shape) write_le(out, dim);
        for (float v : tensor.values) write_le(out, v);
    }
    if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

Checkpoint average_checkpoints(const std::vector<std::string>& files, std::size_t k) {
    if (k < 1) throw Error(ErrorCode::InvalidParams, "k must be >= 1");
    if (files.size() < k) {
        throw Error(ErrorCode::KTooLarge, std::to_string(k) + " checkpoints requested, " +
                                              std::to_string(files.size()) + " available");
    }
    const std::vector<std::string> selected(files.end() - static_cast<std::ptrdiff_t>(k),
                                            files.end());

    Checkpoint first = load_checkpoint(selected.front());
    std::map<std::string, std::vector<double>> sums;
    for (const auto& [name, tensor] : first.tensors) {
        sums.emplace(name, std::vector<double>(tensor.values.begin(), tensor.values.end()));
    }

    for (std::size_t i = 1; i < selected.size(); ++i) {
        const Checkpoint next = load_checkpoint(selected[i]);
        if (next.tensors.size() != first.tensors.size()) {
            throw Error(ErrorCode::MissingTensor, selected[i] + ": tensor set differs");
        }
        for (const auto& [name, tensor] : next.tensors) {
            const auto it = first.tensors.find(name);
            if (it == first.tensors.end()) {
                throw Error(ErrorCode::MissingTensor, selected[i] + ": unexpected tensor " + name);
            }
            if (it->second.shape != tensor.shape) {
                throw Error(ErrorCode::ShapeMismatch, selected[i] + ": shape differs for " + name);
            }
            auto& sum = sums[name];
            for (std::size_t j = 0; j < tensor.values.size(); ++j) {
                sum[j] += static_cast<double>(tensor.values[j]);
            }
        }
    }

    Checkpoint result;
    const double scale = 1.0 / static_cast<double>(k);
    for (auto& [name, tensor] : first.tensors) {
        Tensor avg;
        avg.shape = tensor.shape;
        const auto& sum = sums[name];
        avg.values.resize(sum.size());
        for (std::size_t j = 0; j < sum.size(); ++j) {
            avg.values[j] = static_cast<float>(sum[j] * scale);
        }
        result.tensors.emplace(name, std::move(avg));
    }
    result.metadata["averaged_k"] = std::to_string(k);
    std::string sources;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (i) sources.push_back(',');
        sources += selected[i];
    }
    result.metadata["sources"] = sources;
    return result;
}

}  // namespace cprep
