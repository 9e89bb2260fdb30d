#include "tracegen/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <type_traits>

#include "tracegen/errors.hpp"
#include "tracegen/trace_io.hpp"

namespace tracegen {

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

TraceProfile ProfilePreset::instantiate(std::uint64_t m, std::uint64_t n, std::uint64_t seed) const {
    TraceProfile p;
    p.p_irm = p_irm;
    p.g = g;
    p.f = f;
    p.m = m;
    p.n = n;
    p.seed = seed;
    return p;
}

namespace {

ProfilePreset make(std::string name, std::string description, double p_irm, std::optional<IrmFamily> g,
                   std::optional<IrdSpec> f, std::uint64_t min_m = 1, std::uint64_t min_n = 1) {
    return {std::move(name), std::move(description), p_irm, std::move(g), std::move(f), min_m, min_n};
}

std::vector<ProfilePreset> build_presets() {
    std::vector<ProfilePreset> out;
    out.push_back(make("a", "pure IRM, Zipf(3.0): concave baseline", 1.0, Zipf{3.0}, std::nullopt));
    out.push_back(make("b", "two cliffs with a plateau between", 0.0, std::nullopt, fgen(20, {0, 3}, 5e-3)));
    out.push_back(make("c", "two well-separated cliffs", 0.0, std::nullopt, fgen(20, {2, 9}, 5e-3)));
    out.push_back(make("d", "cliffs at both ends", 0.0, std::nullopt, fgen(5, {0, 4}, 1e-2)));
    out.push_back(make("e", "one early cliff", 0.0, std::nullopt, fgen(20, {1}, 5e-3)));
    out.push_back(make("f", "one centered cliff", 0.0, std::nullopt, fgen(5, {2}, 5e-3)));
    out.push_back(make("w11", "counterfeit of w11", 1.0, Zipf{1.3}, std::nullopt));
    out.push_back(make("w24", "counterfeit of w24", 0.45, Zipf{1.2}, fgen(30, {1, 2}, 5e-3)));
    out.push_back(make("w44", "counterfeit of w44", 0.0, std::nullopt, fgen(30, {9, 13, 17, 19}, 2.5e-2), 10'000,
                       1'000'000));
    out.push_back(make("w82", "counterfeit of w82", 0.2, Zipf{1.2}, fgen(100, {12, 13, 19}, 1e-3)));
    out.push_back(make("v521", "counterfeit of v521", 0.0, std::nullopt, fgen(100, {2}, 2e-3)));
    out.push_back(make("v538", "counterfeit of v538", 0.1, Zipf{1.2}, fgen(40, {3, 4}, 5e-3)));
    out.push_back(make("v766", "counterfeit of v766", 0.0, std::nullopt, fgen(40, {0, 5}, 5.7e-3)));
    out.push_back(make("v827", "counterfeit of v827", 0.2, Zipf{1.2}, fgen(60, {0, 13}, 5e-3)));
    // Spike mass is spread evenly; pair with any p_irm for concavity sweeps.
    out.push_back(make("g", "eight-spike IRD for P_IRM sweeps", 0.0, std::nullopt,
                       fgen(54, {5, 11, 12, 13, 14, 17, 30, 50}, 1e-2)));
    return out;
}

}  // namespace

const std::vector<ProfilePreset>& presets() {
    static const std::vector<ProfilePreset> registry = build_presets();
    return registry;
}

const ProfilePreset& get_preset(std::string_view name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw ValidationError("unknown preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Value parsing
// ---------------------------------------------------------------------------

namespace {

// A slice of the original value plus its 1-based column, so errors can
// point at the offending character.
struct Piece {
    std::string_view s;
    std::size_t col = 1;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, 0, col); }

    Piece trimmed() const {
        Piece p = *this;
        while (!p.s.empty() && (p.s.front() == ' ' || p.s.front() == '\t')) {
            p.s.remove_prefix(1);
            ++p.col;
        }
        while (!p.s.empty() && (p.s.back() == ' ' || p.s.back() == '\t' || p.s.back() == '\r'))
            p.s.remove_suffix(1);
        return p;
    }
    Piece sub(std::size_t pos, std::size_t len = std::string_view::npos) const {
        return {s.substr(pos, len), col + pos};
    }
};

std::vector<Piece> split(const Piece& p, char sep) {
    std::vector<Piece> out;
    std::size_t start = 0;
    for (;;) {
        const auto at = p.s.find(sep, start);
        out.push_back(p.sub(start, at == std::string_view::npos ? std::string_view::npos : at - start).trimmed());
        if (at == std::string_view::npos) break;
        start = at + 1;
    }
    return out;
}

template <class T>
T number(const Piece& p, const char* what) {
    T v{};
    std::string_view s = p.s;
    if constexpr (std::is_floating_point_v<T>) {
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        p.fail(std::string("expected ") + what + ", got '" + std::string(p.s) + "'");
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) p.fail(std::string(what) + " must be finite");
    }
    return v;
}

// Splits "name:rest" and returns the rest (empty piece when there is no ':').
Piece after_colon(const Piece& p) {
    const auto at = p.s.find(':');
    if (at == std::string_view::npos) return {std::string_view{}, p.col + p.s.size()};
    return p.sub(at + 1).trimmed();
}

std::string_view head(const Piece& p) { return p.s.substr(0, p.s.find(':')); }

template <class Fn>
auto rethrow_at(const Piece& p, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError& e) {
        p.fail(e.what());
    }
}

std::optional<IrmFamily> parse_g_piece(const Piece& raw) {
    const Piece p = raw.trimmed();
    if (p.s.empty()) p.fail("empty IRM distribution");
    const auto name = head(p);
    const Piece args = after_colon(p);
    const auto list = args.s.empty() ? std::vector<Piece>{} : split(args, ',');
    auto want = [&](std::size_t lo, std::size_t hi) {
        if (list.size() < lo || list.size() > hi)
            args.fail(std::string(name) + " takes " +
                      (lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi)) +
                      " parameter(s)");
    };

    if (name == "none") {
        want(0, 0);
        return std::nullopt;
    }
    if (name == "zipf") {
        want(0, 1);
        Zipf z;
        if (!list.empty()) z.alpha = number<double>(list[0], "alpha");
        if (!(z.alpha > 0.0)) list[0].fail("zipf alpha must be > 0");
        return z;
    }
    if (name == "pareto") {
        want(1, 2);
        Pareto d;
        d.alpha = number<double>(list[0], "alpha");
        if (!(d.alpha > 0.0)) list[0].fail("pareto alpha must be > 0");
        if (list.size() == 2) {
            d.x_m = number<double>(list[1], "x_m");
            if (!(d.x_m >= 1.0)) list[1].fail("pareto x_m must be >= 1");
        }
        return d;
    }
    if (name == "normal") {
        want(2, 2);
        Normal d{number<double>(list[0], "mu"), number<double>(list[1], "sigma")};
        if (!(d.sigma > 0.0)) list[1].fail("normal sigma must be > 0");
        return d;
    }
    if (name == "uniform") {
        want(0, 0);
        return Uniform{};
    }
    if (name == "empirical") {
        if (list.empty()) args.fail("empirical needs at least one count");
        EmpiricalCounts c;
        for (const auto& item : list) {
            const double v = number<double>(item, "count");
            if (v < 0.0) item.fail("counts must be non-negative");
            c.counts.push_back(v);
        }
        if (std::all_of(c.counts.begin(), c.counts.end(), [](double v) { return v == 0.0; }))
            args.fail("counts sum to zero");
        return c;
    }
    p.fail("unknown IRM family '" + std::string(name) + "' (zipf, pareto, normal, uniform, empirical, none)");
}

// `inf=W` entries in a list; returns true when `item` was one.
bool take_inf(const Piece& item, double& inf, bool& seen) {
    if (item.s.substr(0, 4) != "inf=") return false;
    if (seen) item.fail("duplicate inf entry");
    seen = true;
    inf = number<double>(item.sub(4), "count");
    if (inf < 0.0) item.fail("inf weight must be non-negative");
    return true;
}

std::optional<IrdSpec> parse_f_piece(const Piece& raw) {
    const Piece p = raw.trimmed();
    if (p.s.empty()) p.fail("empty IRD distribution");
    const auto name = head(p);
    const Piece args = after_colon(p);

    if (name == "none" && args.s.empty()) return std::nullopt;
    if (name == "fgen") {
        const auto parts = split(args, ':');
        if (parts.size() != 3) args.fail("fgen takes k:epsilon:spike,spike,...");
        const auto k = number<std::size_t>(parts[0], "bin count k");
        const auto eps = number<double>(parts[1], "epsilon");
        std::vector<std::size_t> spikes;
        for (const auto& s : split(parts[2], ',')) spikes.push_back(number<std::size_t>(s, "spike index"));
        return rethrow_at(args, [&] { return fgen(k, std::move(spikes), eps); });
    }
    if (name == "stepwise") {
        std::vector<double> weights;
        double inf = 0.0;
        bool seen = false;
        for (const auto& item : split(args, ',')) {
            if (take_inf(item, inf, seen)) continue;
            const double w = number<double>(item, "weight");
            if (w < 0.0) item.fail("weights must be non-negative");
            weights.push_back(w);
        }
        return rethrow_at(args, [&] { return stepwise(std::move(weights), inf); });
    }
    if (name == "empirical") {
        std::vector<IrdRow> rows;
        double inf = 0.0;
        bool seen = false;
        for (const auto& item : split(args, ',')) {
            if (take_inf(item, inf, seen)) continue;
            const auto eq = item.s.find('=');
            if (eq == std::string_view::npos) item.fail("expected LO-HI=COUNT or VALUE=COUNT");
            const Piece range = item.sub(0, eq).trimmed();
            IrdRow row;
            const auto dash = range.s.find('-');
            if (dash == std::string_view::npos) {
                row.lo = row.hi = number<std::uint64_t>(range, "IRD");
            } else {
                row.lo = number<std::uint64_t>(range.sub(0, dash).trimmed(), "IRD");
                row.hi = number<std::uint64_t>(range.sub(dash + 1).trimmed(), "IRD");
            }
            row.count = number<double>(item.sub(eq + 1).trimmed(), "count");
            if (row.count < 0.0) item.fail("counts must be non-negative");
            rows.push_back(row);
        }
        return rethrow_at(args, [&] { return empirical_ird(std::move(rows), inf); });
    }
    if (!p.s.empty() && p.s.find(':') == std::string_view::npos) {
        for (const auto& preset : presets())
            if (preset.name == p.s) return preset.f;
    }
    p.fail("unknown IRD distribution '" + std::string(p.s) +
           "' (fgen:K:EPS:I,..., stepwise:..., empirical:..., a preset name, or none)");
}

SizeDistribution parse_sizedist_piece(const Piece& raw) {
    const Piece p = raw.trimmed();
    const auto halves = split(p, ':');
    if (halves.size() != 2) p.fail("expected WEIGHTS:VALUES, e.g. 1,1,1:1,3,4");
    SizeDistribution d;
    for (const auto& w : split(halves[0], ',')) {
        d.weights.push_back(number<double>(w, "weight"));
        if (!(d.weights.back() > 0.0)) w.fail("size weights must be positive");
    }
    for (const auto& v : split(halves[1], ',')) {
        const auto blocks = number<std::uint32_t>(v, "block count");
        if (blocks == 0) v.fail("request sizes must be >= 1 block");
        d.values.push_back(blocks);
    }
    if (d.weights.size() != d.values.size())
        p.fail("got " + std::to_string(d.weights.size()) + " weights but " + std::to_string(d.values.size()) +
               " sizes");
    return d;
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += format_double(xs[i]);
    }
    return out;
}

}  // namespace

std::optional<IrmFamily> parse_g(std::string_view text) { return parse_g_piece({text, 1}); }
std::optional<IrdSpec> parse_f(std::string_view text) { return parse_f_piece({text, 1}); }
SizeDistribution parse_sizedist(std::string_view text) { return parse_sizedist_piece({text, 1}); }

std::string render_g(const std::optional<IrmFamily>& g) {
    if (!g) return "none";
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Zipf>) return "zipf:" + format_double(d.alpha);
            else if constexpr (std::is_same_v<T, Pareto>)
                return "pareto:" + format_double(d.alpha) + "," + format_double(d.x_m);
            else if constexpr (std::is_same_v<T, Normal>)
                return "normal:" + format_double(d.mu) + "," + format_double(d.sigma);
            else if constexpr (std::is_same_v<T, Uniform>) return "uniform";
            else return "empirical:" + join(d.counts);
        },
        *g);
}

std::string render_f(const std::optional<IrdSpec>& f) {
    if (!f) return "none";
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FgenSource>) {
                std::string out = "fgen:" + std::to_string(s.k) + ":" + format_double(s.epsilon) + ":";
                for (std::size_t i = 0; i < s.spikes.size(); ++i) {
                    if (i) out += ',';
                    out += std::to_string(s.spikes[i]);
                }
                return out;
            } else if constexpr (std::is_same_v<T, StepwiseSource>) {
                std::string out = "stepwise:" + join(s.weights);
                if (s.inf_weight > 0.0) out += ",inf=" + format_double(s.inf_weight);
                return out;
            } else {
                std::string out = "empirical:";
                for (std::size_t i = 0; i < s.rows.size(); ++i) {
                    const auto& r = s.rows[i];
                    if (i) out += ',';
                    out += std::to_string(r.lo);
                    if (r.hi != r.lo) out += "-" + std::to_string(r.hi);
                    out += "=" + format_double(r.count);
                }
                if (s.inf_count > 0.0) out += (s.rows.empty() ? "inf=" : ",inf=") + format_double(s.inf_count);
                return out;
            }
        },
        f->source());
}

std::string render_sizedist(const SizeDistribution& sizes) {
    std::string out = join(sizes.weights) + ":";
    for (std::size_t i = 0; i < sizes.values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(sizes.values[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

TraceProfile parse_profile(std::string_view text) {
    TraceProfile profile;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        const std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        Piece line{raw.substr(0, raw.find('#')), 1};
        line = line.trimmed();
        if (line.s.empty()) continue;
        try {
            const auto eq = line.s.find('=');
            if (eq == std::string_view::npos) line.fail("expected 'key = value'");
            const Piece key = line.sub(0, eq).trimmed();
            const Piece value = line.sub(eq + 1).trimmed();
            if (key.s.empty()) key.fail("missing key");
            if (!seen.insert(std::string(key.s)).second) key.fail("duplicate key '" + std::string(key.s) + "'");
            if (value.s.empty()) value.fail("missing value for '" + std::string(key.s) + "'");

            if (key.s == "p_irm") {
                profile.p_irm = number<double>(value, "p_irm");
                if (!(profile.p_irm >= 0.0 && profile.p_irm <= 1.0)) value.fail("p_irm must be in [0, 1]");
            } else if (key.s == "g") {
                profile.g = parse_g_piece(value);
            } else if (key.s == "f") {
                profile.f = parse_f_piece(value);
            } else if (key.s == "m") {
                profile.m = number<std::uint64_t>(value, "footprint");
            } else if (key.s == "n") {
                profile.n = number<std::uint64_t>(value, "length");
            } else if (key.s == "seed") {
                profile.seed = number<std::uint64_t>(value, "seed");
            } else if (key.s == "universe") {
                profile.universe = number<std::uint64_t>(value, "universe size");
            } else if (key.s == "overlap") {
                if (value.s == "true") profile.overlap = true;
                else if (value.s == "false") profile.overlap = false;
                else value.fail("expected true or false");
            } else if (key.s == "read_fraction") {
                profile.read_fraction = number<double>(value, "read fraction");
            } else if (key.s == "sizedist") {
                profile.sizes = parse_sizedist_piece(value);
            } else {
                key.fail("unknown key '" + std::string(key.s) + "'");
            }
        } catch (const ParseError& e) {
            throw ParseError(e.reason(), line_no, e.column());
        }
    }
    profile.validate();
    return profile;
}

std::string render_profile(const TraceProfile& p) {
    std::string out;
    out += "p_irm = " + format_double(p.p_irm) + "\n";
    out += "g = " + render_g(p.g) + "\n";
    out += "f = " + render_f(p.f) + "\n";
    out += "m = " + std::to_string(p.m) + "\n";
    out += "n = " + std::to_string(p.n) + "\n";
    out += "seed = " + std::to_string(p.seed) + "\n";
    if (p.universe) out += "universe = " + std::to_string(*p.universe) + "\n";
    if (p.overlap) out += "overlap = true\n";
    if (p.read_fraction) out += "read_fraction = " + format_double(*p.read_fraction) + "\n";
    if (p.sizes) out += "sizedist = " + render_sizedist(*p.sizes) + "\n";
    return out;
}

}  // namespace tracegen
