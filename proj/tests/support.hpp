#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <list>
#include <random>
#include <string>
#include <vector>

#include "tracegen/rng.hpp"

namespace testing {

// Random trace over `alphabet` ids with a random length in [1, max_len].
inline std::vector<std::uint64_t> random_trace(tracegen::Rng& rng, std::size_t max_len, std::uint64_t alphabet) {
    const auto n = rng.uniform_int(1, max_len);
    std::vector<std::uint64_t> t(n);
    for (auto& r : t) r = rng.uniform_int(0, alphabet - 1);
    return t;
}

// Textbook LRU hit count: a recency list, no shortcuts.
inline std::uint64_t reference_lru_hits(const std::vector<std::uint64_t>& trace, std::size_t capacity) {
    std::list<std::uint64_t> stack;
    std::uint64_t hits = 0;
    for (auto r : trace) {
        auto it = stack.begin();
        while (it != stack.end() && *it != r) ++it;
        if (it != stack.end()) {
            ++hits;
            stack.erase(it);
        } else if (stack.size() == capacity) {
            stack.pop_back();
        }
        stack.push_front(r);
    }
    return hits;
}

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("tracegen-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(TRACEGEN_FIXTURE_DIR) / name;
}

}  // namespace testing
