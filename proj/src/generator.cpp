#include "tracegen/generator.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "tracegen/errors.hpp"

namespace tracegen {

// ---------------------------------------------------------------------------
// TraceProfile
// ---------------------------------------------------------------------------

void TraceProfile::validate() const {
    if (!(p_irm >= 0.0 && p_irm <= 1.0))
        throw ValidationError("p_irm must be in [0, 1]");
    if (m == 0) throw ValidationError("footprint m must be >= 1");
    if (n == 0) throw ValidationError("length n must be >= 1");
    if (p_irm < 1.0 && !f)
        throw ProfileError("p_irm < 1 requires an IRD distribution f");
    if (p_irm > 0.0 && !g)
        throw ProfileError("p_irm > 0 requires an IRM distribution g");
    if (universe && *universe == 0) throw ValidationError("IRM universe must be >= 1");
    if (f && p_irm < 1.0 && !(f->finite_mass() > 0.0))
        throw ValidationError("f has no finite IRD mass; the sleeper heap cannot be filled");
    if (read_fraction && !(*read_fraction >= 0.0 && *read_fraction <= 1.0))
        throw ValidationError("read fraction must be in [0, 1]");
    if (sizes) {
        if (sizes->values.empty() || sizes->values.size() != sizes->weights.size())
            throw ValidationError("size distribution needs matching, non-empty weights and values");
        for (double w : sizes->weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw ValidationError("size weights must be positive");
        for (auto v : sizes->values)
            if (v == 0) throw ValidationError("request sizes must be >= 1 block");
    }
}

// ---------------------------------------------------------------------------
// SleeperHeap
// ---------------------------------------------------------------------------

void SleeperHeap::push(std::uint64_t wake, std::uint64_t addr) {
    entries_.push_back({wake, next_seq_++, addr});
    std::size_t i = entries_.size() - 1;
    while (i > 0) {
        const std::size_t parent = (i - 1) / 2;
        if (!before(entries_[i], entries_[parent])) break;
        std::swap(entries_[i], entries_[parent]);
        i = parent;
    }
}

void SleeperHeap::replace_top(std::uint64_t wake) {
    Entry moving{wake, next_seq_++, entries_.front().addr};
    const std::size_t n = entries_.size();
    std::size_t i = 0;
    for (;;) {
        std::size_t child = 2 * i + 1;
        if (child >= n) break;
        if (child + 1 < n && before(entries_[child + 1], entries_[child])) ++child;
        if (!before(entries_[child], moving)) break;
        entries_[i] = entries_[child];
        i = child;
    }
    entries_[i] = moving;
}

// ---------------------------------------------------------------------------
// DependentProcess
// ---------------------------------------------------------------------------

DependentProcess::DependentProcess(IrdSpec f, std::uint64_t m, Rng& rng) : f_(std::move(f)) {
    if (m == 0) throw ValidationError("gen_from_ird: footprint m must be >= 1");
    if (!f_.has_sample_space())
        throw ValidationError("gen_from_ird: f has no sample space; auto-tune it for m first");
    if (!(f_.finite_mass() > 0.0))
        throw ValidationError("gen_from_ird: p_infinite = 1 cannot fill the sleeper heap");
    heap_.reserve(m);
    std::uint64_t addr = 0;
    while (heap_.size() < m) {
        const std::uint64_t t = sample_ird(f_, rng);
        if (t != kInfiniteIrd) heap_.push(t, addr++);
    }
    footprint_ = m;
    next_address_ = addr;
}

DependentProcess::DependentProcess(IrdSpec f, const std::vector<std::uint64_t>& wake_times)
    : f_(std::move(f)) {
    if (!f_.has_sample_space())
        throw ValidationError("gen_from_ird: f has no sample space; auto-tune it for m first");
    heap_.reserve(wake_times.size());
    for (std::uint64_t a = 0; a < wake_times.size(); ++a) heap_.push(wake_times[a], a);
    footprint_ = wake_times.size();
    next_address_ = footprint_;
}

std::uint64_t DependentProcess::next(Rng& rng, Source* source) {
    const std::uint64_t t = sample_ird(f_, rng);
    if (t == kInfiniteIrd || heap_.empty()) {
        if (source) *source = Source::Singleton;
        return next_address_++;
    }
    const auto top = heap_.top();
    heap_.replace_top(top.wake + t);
    if (source) *source = Source::Dependent;
    return top.addr;
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

Trace gen_from_ird(const IrdSpec& f, std::uint64_t m, std::uint64_t n, Rng& rng) {
    DependentProcess process(f, m, rng);
    Trace trace;
    trace.refs.resize(n);
    for (auto& r : trace.refs) r = process.next(rng);
    return trace;
}

namespace {

Generated run_profile(const TraceProfile& profile, bool tag_sources, bool with_stats) {
    profile.validate();
    Rng rng(profile.seed);

    const double p = profile.p_irm;
    std::optional<DependentProcess> dependent;
    if (p < 1.0) dependent.emplace(auto_tune_tmax(*profile.f, profile.m), profile.m, rng);

    std::optional<IrmSpec> irm;
    if (p > 0.0) irm = build_irm(*profile.g, profile.irm_universe());
    const std::uint64_t irm_base = profile.overlap ? 0 : kIrmAddressBase;

    Generated out;
    auto& refs = out.trace.refs;
    refs.resize(profile.n);
    if (tag_sources) out.sources.resize(profile.n);

    auto& st = out.stats;
    std::vector<bool> dep_seen(with_stats && dependent ? profile.m : 0, false);
    std::vector<bool> irm_seen(with_stats && irm ? irm->universe_size() : 0, false);

    for (std::uint64_t j = 0; j < profile.n; ++j) {
        const bool independent = p >= 1.0 || (p > 0.0 && rng.uniform01() < p);
        Source src;
        if (independent) {
            const std::uint64_t idx = sample_item(*irm, rng);
            refs[j] = irm_base + idx;
            src = Source::Independent;
            if (with_stats) {
                ++st.independent_refs;
                if (!irm_seen[idx]) {
                    irm_seen[idx] = true;
                    ++st.independent_items;
                }
            }
        } else {
            refs[j] = dependent->next(rng, &src);
            if (with_stats && src == Source::Dependent && !dep_seen[refs[j]]) {
                dep_seen[refs[j]] = true;
                ++st.dependent_items;
            }
        }
        if (tag_sources) out.sources[j] = src;
    }

    if (with_stats) {
        st.length = profile.n;
        st.singletons = dependent ? dependent->singletons() : 0;
        if (profile.overlap) {
            std::unordered_set<std::uint64_t> seen(refs.begin(), refs.end());
            st.footprint = seen.size();
        } else {
            st.footprint = st.dependent_items + st.independent_items + st.singletons;
        }
    }
    return out;
}

}  // namespace

Trace gen_from_2d(const TraceProfile& profile) {
    return std::move(run_profile(profile, false, false).trace);
}

Trace decorate(Trace trace, double read_fraction, const SizeDistribution& sizes, Rng& rng) {
    if (!(read_fraction >= 0.0 && read_fraction <= 1.0))
        throw ValidationError("read fraction must be in [0, 1]");
    if (sizes.values.empty() || sizes.values.size() != sizes.weights.size())
        throw ValidationError("size distribution needs matching, non-empty weights and values");
    std::vector<double> cumulative(sizes.weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < sizes.weights.size(); ++i) {
        if (!(sizes.weights[i] > 0.0) || !std::isfinite(sizes.weights[i]))
            throw ValidationError("size weights must be positive");
        if (sizes.values[i] == 0) throw ValidationError("request sizes must be >= 1 block");
        acc += sizes.weights[i];
        cumulative[i] = acc;
    }

    const std::size_t n = trace.refs.size();
    trace.ops.resize(n);
    trace.sizes.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        trace.ops[j] = rng.uniform01() < read_fraction ? Op::Read : Op::Write;
        const double u = rng.uniform01() * acc;
        std::size_t pick = 0;
        while (pick + 1 < cumulative.size() && cumulative[pick] <= u) ++pick;
        trace.sizes[j] = sizes.values[pick];
    }
    return trace;
}

Generated generate(const TraceProfile& profile, bool tag_sources) {
    Generated out = run_profile(profile, tag_sources, true);
    if (profile.decorated()) {
        Rng deco = Rng(profile.seed).split();
        out.trace = decorate(std::move(out.trace), profile.read_fraction.value_or(1.0),
                             profile.sizes.value_or(SizeDistribution{{1.0}, {1}}), deco);
    }
    return out;
}

}  // namespace tracegen
