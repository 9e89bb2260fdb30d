#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace httplib {
class Server;
}

namespace tracegen::service {

inline constexpr std::uint64_t kMaxFootprint = 100'000;
inline constexpr std::uint64_t kMaxLength = 10'000'000;
inline constexpr std::uint64_t kDefaultM = 100;
inline constexpr std::uint64_t kDefaultN = 10'000;

struct Response {
    int status = 200;
    std::string body;  // JSON
};

/// POST /v1/hrc. The request is a JSON object; every field is optional:
///   preset        name whose p_irm/g/f seed the fields below
///   p_irm         number in [0, 1]
///   g, f          value strings as in profile configs, or null for none
///   m, n, seed    integers (defaults 100, 10000, fixed seed)
///   universe      IRM universe size; overlap: bool
///   policy        lru | fifo | clock | lfu
///   sizes         cache sizes in items; default is every size for LRU and
///                 64 geometric sizes otherwise
/// Errors: 400 with per-field messages, 413 past the scale guards, 422 for
/// an inconsistent triplet.
Response handle_hrc(std::string_view request_body);

/// GET /v1/presets
Response handle_presets();

/// GET /v1/health
Response handle_health();

/// Mounts the three routes, CORS headers and JSON 404s.
void mount(httplib::Server& server);

}  // namespace tracegen::service
