#include "tracegen/cachesim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <list>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "tracegen/errors.hpp"

namespace tracegen {

std::string_view to_string(Policy p) noexcept {
    switch (p) {
        case Policy::Lru: return "lru";
        case Policy::Fifo: return "fifo";
        case Policy::Clock: return "clock";
        case Policy::Lfu: return "lfu";
    }
    return "lru";
}

Policy parse_policy(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "lru") return Policy::Lru;
    if (lower == "fifo") return Policy::Fifo;
    if (lower == "clock") return Policy::Clock;
    if (lower == "lfu") return Policy::Lfu;
    throw ValidationError("unknown cache policy '" + std::string(name) + "'");
}

double HitRatioCurve::at(double cache_size) const {
    auto it = std::upper_bound(points.begin(), points.end(), cache_size,
                               [](double c, const Point& p) { return c < p.cache_size; });
    if (it == points.begin()) return 0.0;
    return std::prev(it)->hit_ratio;
}

Footprint measure_footprint(std::span<const std::uint64_t> refs) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(refs.size());
    for (auto r : refs) seen.insert(r);
    return {seen.size(), refs.size()};
}

namespace {

std::uint64_t simulate_lru(std::span<const std::uint64_t> refs, std::uint64_t capacity) {
    std::list<std::uint64_t> order;  // front = most recent
    std::unordered_map<std::uint64_t, std::list<std::uint64_t>::iterator> where;
    std::uint64_t hits = 0;
    for (auto r : refs) {
        auto it = where.find(r);
        if (it != where.end()) {
            ++hits;
            order.splice(order.begin(), order, it->second);
            continue;
        }
        if (order.size() == capacity) {
            where.erase(order.back());
            order.pop_back();
        }
        order.push_front(r);
        where[r] = order.begin();
    }
    return hits;
}

std::uint64_t simulate_fifo(std::span<const std::uint64_t> refs, std::uint64_t capacity) {
    std::deque<std::uint64_t> queue;
    std::unordered_set<std::uint64_t> resident;
    std::uint64_t hits = 0;
    for (auto r : refs) {
        if (resident.count(r)) {
            ++hits;
            continue;
        }
        if (queue.size() == capacity) {
            resident.erase(queue.front());
            queue.pop_front();
        }
        queue.push_back(r);
        resident.insert(r);
    }
    return hits;
}

// Inserted items start with a clear reference bit; a hit sets it.
std::uint64_t simulate_clock(std::span<const std::uint64_t> refs, std::uint64_t capacity) {
    struct Slot {
        std::uint64_t id;
        bool referenced;
    };
    std::vector<Slot> slots;
    slots.reserve(std::min<std::uint64_t>(capacity, refs.size()));
    std::unordered_map<std::uint64_t, std::size_t> where;
    std::size_t hand = 0;
    std::uint64_t hits = 0;
    for (auto r : refs) {
        auto it = where.find(r);
        if (it != where.end()) {
            ++hits;
            slots[it->second].referenced = true;
            continue;
        }
        if (slots.size() < capacity) {
            where[r] = slots.size();
            slots.push_back({r, false});
            continue;
        }
        while (slots[hand].referenced) {
            slots[hand].referenced = false;
            hand = (hand + 1) % slots.size();
        }
        where.erase(slots[hand].id);
        slots[hand] = {r, false};
        where[r] = hand;
        hand = (hand + 1) % slots.size();
    }
    return hits;
}

std::uint64_t simulate_lfu(std::span<const std::uint64_t> refs, std::uint64_t capacity) {
    // (frequency, last use, id); the smallest tuple is the victim.
    using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;
    std::set<Key> order;
    std::unordered_map<std::uint64_t, Key> keys;
    std::uint64_t hits = 0;
    std::uint64_t now = 0;
    for (auto r : refs) {
        ++now;
        auto it = keys.find(r);
        if (it != keys.end()) {
            ++hits;
            order.erase(it->second);
            it->second = {std::get<0>(it->second) + 1, now, r};
            order.insert(it->second);
            continue;
        }
        if (keys.size() == capacity) {
            auto victim = order.begin();
            keys.erase(std::get<2>(*victim));
            order.erase(victim);
        }
        Key k{1, now, r};
        keys.emplace(r, k);
        order.insert(k);
    }
    return hits;
}

class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
    void add(std::size_t i, int delta) {
        for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
    }
    // Sum over [0, i).
    std::int64_t prefix(std::size_t i) const {
        std::int64_t s = 0;
        for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
        return s;
    }

private:
    std::vector<std::int64_t> tree_;
};

}  // namespace

double simulate(std::span<const std::uint64_t> refs, Policy policy, std::uint64_t cache_size) {
    if (cache_size == 0) throw ValidationError("cache size must be >= 1");
    if (refs.empty()) return 0.0;
    std::uint64_t hits = 0;
    switch (policy) {
        case Policy::Lru: hits = simulate_lru(refs, cache_size); break;
        case Policy::Fifo: hits = simulate_fifo(refs, cache_size); break;
        case Policy::Clock: hits = simulate_clock(refs, cache_size); break;
        case Policy::Lfu: hits = simulate_lfu(refs, cache_size); break;
    }
    return static_cast<double>(hits) / static_cast<double>(refs.size());
}

std::vector<std::uint64_t> stack_distances(std::span<const std::uint64_t> refs) {
    const std::size_t n = refs.size();
    std::vector<std::uint64_t> out(n, kInfiniteIrd);
    std::unordered_map<std::uint64_t, std::size_t> last;
    last.reserve(n);
    // One marker at the latest position of every item seen so far.
    Fenwick markers(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto [it, fresh] = last.try_emplace(refs[j], j);
        if (!fresh) {
            const std::size_t prev = it->second;
            const auto between = markers.prefix(j) - markers.prefix(prev + 1);
            out[j] = static_cast<std::uint64_t>(between) + 1;
            markers.add(prev, -1);
            it->second = j;
        }
        markers.add(j, 1);
    }
    return out;
}

HitRatioCurve exact_lru_hrc(std::span<const std::uint64_t> refs) {
    HitRatioCurve curve;
    curve.policy = "lru";
    curve.length = refs.size();
    if (refs.empty()) return curve;

    const auto distances = stack_distances(refs);
    std::uint64_t max_sd = 0, cold = 0;
    for (auto d : distances) {
        if (d == kInfiniteIrd) ++cold;
        else max_sd = std::max(max_sd, d);
    }
    curve.footprint = cold;  // one first touch per distinct item

    std::vector<std::uint64_t> histogram(max_sd + 1, 0);
    for (auto d : distances)
        if (d != kInfiniteIrd) ++histogram[d];

    const double n = static_cast<double>(refs.size());
    std::uint64_t cumulative = 0;
    curve.points.reserve(max_sd + 1);
    for (std::uint64_t c = 1; c <= max_sd; ++c) {
        cumulative += histogram[c];
        curve.points.push_back({static_cast<double>(c), static_cast<double>(cumulative) / n});
    }
    if (curve.footprint > max_sd)
        curve.points.push_back({static_cast<double>(curve.footprint), static_cast<double>(cumulative) / n});
    return curve;
}

std::vector<std::uint64_t> geometric_sizes(std::uint64_t footprint, std::size_t count) {
    std::vector<std::uint64_t> sizes;
    if (footprint == 0 || count == 0) return sizes;
    sizes.push_back(1);
    const double log_fp = std::log(static_cast<double>(footprint));
    for (std::size_t i = 1; i + 1 < count; ++i) {
        const double x = std::exp(log_fp * static_cast<double>(i) / static_cast<double>(count - 1));
        sizes.push_back(static_cast<std::uint64_t>(std::llround(x)));
    }
    sizes.push_back(footprint);
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    return sizes;
}

HitRatioCurve simulate_hrc(std::span<const std::uint64_t> refs, Policy policy,
                           std::vector<std::uint64_t> sizes, unsigned threads) {
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (!sizes.empty() && sizes.front() == 0) throw ValidationError("cache size must be >= 1");

    HitRatioCurve curve;
    curve.policy = std::string(to_string(policy));
    curve.length = refs.size();

    if (policy == Policy::Lru) {
        const auto full = exact_lru_hrc(refs);
        curve.footprint = full.footprint;
        for (auto c : sizes) curve.points.push_back({static_cast<double>(c), full.at(static_cast<double>(c))});
        return curve;
    }

    curve.footprint = measure_footprint(refs).distinct;
    std::vector<double> hits(sizes.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(sizes.size(), 1)));
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t i = w; i < sizes.size(); i += threads)
                    hits[i] = simulate(refs, policy, sizes[i]);
            });
        }
    }
    for (std::size_t i = 0; i < sizes.size(); ++i)
        curve.points.push_back({static_cast<double>(sizes[i]), hits[i]});
    return curve;
}

}  // namespace tracegen
