#include "tracegen/trace.hpp"

namespace tracegen {

std::vector<std::uint64_t> block_refs(const Trace& trace) {
    if (trace.sizes.empty()) return trace.refs;
    std::vector<std::uint64_t> out;
    out.reserve(trace.refs.size());
    for (std::size_t j = 0; j < trace.refs.size(); ++j)
        for (std::uint32_t b = 0; b < trace.sizes[j]; ++b) out.push_back(trace.refs[j] + b);
    return out;
}

}  // namespace tracegen
