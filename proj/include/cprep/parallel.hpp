#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace cprep {

// Order-preserving parallel map: out[i] = fn(in[i]). fn must be safe to
// call concurrently on distinct elements.
template <typename In, typename Out, typename Fn>
void parallel_map_ordered(const std::vector<In>& in, std::vector<Out>& out, const Fn& fn,
                          int workers) {
    out.resize(in.size());
    if (workers <= 1 || in.size() < 2) {
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = fn(in[i]);
        return;
    }
    const std::size_t n = in.size();
    const std::size_t count = std::min<std::size_t>(workers, n);
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t begin = n * w / count;
        const std::size_t end = n * (w + 1) / count;
        threads.emplace_back([&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) out[i] = fn(in[i]);
        });
    }
    for (auto& t : threads) t.join();
}

}  // namespace cprep
