#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "tracegen/analysis.hpp"
#include "tracegen/cachesim.hpp"
#include "tracegen/errors.hpp"
#include "tracegen/generator.hpp"
#include "tracegen/profiles.hpp"
#include "tracegen/trace_io.hpp"

namespace tracegen::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A flag value that does not parse or names nothing known is a usage error.
template <class Fn>
auto flag_value(const char* flag, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

std::string infer_format(const std::string& format, const std::string& path) {
    if (format != "auto") return format;
    const auto ext = std::filesystem::path(path).extension().string();
    return ext == ".spc" || ext == ".csv" ? "spc" : "parda";
}

std::vector<std::uint64_t> load_refs(const std::string& path, const std::string& format, std::uint32_t block_size) {
    if (infer_format(format, path) == "spc") return block_refs(read_spc(std::filesystem::path(path), block_size));
    return read_parda(std::filesystem::path(path)).refs;
}

// Writes to `path`, or to `out` when no path was given.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
    if (path.empty() || path == "-") {
        write(out);
        return;
    }
    std::ofstream file(path, std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    write(file);
    file.flush();
    if (!file) throw IoError("write to '" + path + "' failed");
}

std::vector<std::uint64_t> parse_sizes(const std::string& text) {
    std::vector<std::uint64_t> sizes;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || v == 0)
            throw UsageError("--sizes: expected positive integers, 'auto' or 'all', got '" + item + "'");
        sizes.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return sizes;
}

struct GenerateFlags {
    std::uint64_t m = 0, n = 0;
    std::string f, g, preset, config, ird_hist, irm_hist, seed, sizedist, output, format = "parda";
    double p = 0.0, rw = 1.0;
    std::uint64_t universe = 0;
    std::uint32_t block_size = kDefaultBlockSize;
    bool overlap = false;
    CLI::Option *m_opt, *n_opt, *p_opt, *g_opt, *rw_opt, *universe_opt;
};

TraceProfile build_profile(const GenerateFlags& fl) {
    TraceProfile profile;
    if (!fl.config.empty()) {
        std::ifstream in(fl.config);
        if (!in) throw IoError("cannot open '" + fl.config + "' for reading");
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        profile = parse_profile(text);
    }
    if (!fl.preset.empty()) {
        const auto& preset = flag_value("--preset", [&]() -> const ProfilePreset& { return get_preset(fl.preset); });
        profile.p_irm = preset.p_irm;
        profile.g = preset.g;
        profile.f = preset.f;
    }
    if (fl.p_opt->count()) profile.p_irm = fl.p;
    if (!fl.f.empty()) profile.f = flag_value("-f", [&] { return parse_f(fl.f); });
    if (!fl.ird_hist.empty()) profile.f = load_ird_histogram(fl.ird_hist);
    if (!fl.g.empty()) profile.g = flag_value("-g", [&] { return parse_g(fl.g); });
    if (!fl.irm_hist.empty()) profile.g = load_irm_counts(fl.irm_hist);
    // Mixed profiles fall back to Zipf(1.2); a pure-IRM run must name g.
    if (!profile.g && profile.p_irm > 0.0 && profile.p_irm < 1.0) profile.g = Zipf{1.2};

    if (fl.m_opt->count()) profile.m = fl.m;
    if (fl.n_opt->count()) profile.n = fl.n;
    if (fl.config.empty() && (!fl.m_opt->count() || !fl.n_opt->count()))
        throw UsageError("-m and -n are required unless --config is given");
    if (fl.universe_opt->count()) profile.universe = fl.universe;
    if (fl.overlap) profile.overlap = true;
    if (fl.seed == "random") {
        std::random_device rd;
        profile.seed = (std::uint64_t{rd()} << 32) | rd();
    } else if (!fl.seed.empty()) {
        std::uint64_t s = 0;
        const auto [ptr, ec] = std::from_chars(fl.seed.data(), fl.seed.data() + fl.seed.size(), s);
        if (ec != std::errc{} || ptr != fl.seed.data() + fl.seed.size())
            throw UsageError("--seed: expected an unsigned integer or 'random', got '" + fl.seed + "'");
        profile.seed = s;
    }
    if (fl.rw_opt->count()) profile.read_fraction = fl.rw;
    if (!fl.sizedist.empty()) profile.sizes = flag_value("--sizedist", [&] { return parse_sizedist(fl.sizedist); });
    profile.validate();
    return profile;
}

int cmd_generate(const GenerateFlags& fl, std::ostream& out, std::ostream& err) {
    const auto profile = build_profile(fl);
    const std::string path = fl.output.empty() ? "trace." + fl.format : fl.output;

    const auto start = std::chrono::steady_clock::now();
    const auto gen = generate(profile);
    if (fl.format == "spc") write_spc(gen.trace, std::filesystem::path(path), fl.block_size);
    else if (gen.trace.has_multiblock()) write_parda(Trace{block_refs(gen.trace), {}, {}, {}}, std::filesystem::path(path));
    else write_parda(gen.trace, std::filesystem::path(path));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    nlohmann::ordered_json summary{{"output", path},
                                   {"format", fl.format},
                                   {"length", gen.stats.length},
                                   {"footprint", gen.stats.footprint},
                                   {"m", profile.m},
                                   {"p_irm", profile.p_irm},
                                   {"g", render_g(profile.g)},
                                   {"f", render_f(profile.f)},
                                   {"seed", profile.seed},
                                   {"dependent_items", gen.stats.dependent_items},
                                   {"singletons", gen.stats.singletons},
                                   {"independent_refs", gen.stats.independent_refs},
                                   {"independent_items", gen.stats.independent_items}};
    out << summary.dump() << '\n';
    err << "trace-gen: wrote " << gen.stats.length << " references to " << path << " in " << elapsed.count()
        << " s\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthetic block-I/O trace generator with tunable hit-ratio curves.", "trace-gen"};
    app.require_subcommand(0, 1);

    GenerateFlags fl;
    fl.m_opt = app.add_option("-m", fl.m, "Footprint of the dependent process (items)");
    fl.n_opt = app.add_option("-n", fl.n, "Trace length (references)");
    app.add_option("-f", fl.f, "IRD distribution: preset name, fgen:K:EPS:I,J,..., stepwise:..., empirical:..., none");
    fl.g_opt = app.add_option("-g", fl.g, "IRM distribution: zipf:A, pareto:A,XM, normal:MU,SIGMA, uniform, none");
    fl.p_opt = app.add_option("-p", fl.p, "Probability of an independent (IRM) arrival")->check(CLI::Range(0.0, 1.0));
    app.add_option("--preset", fl.preset, "Start from a named preset (flags override its fields)");
    app.add_option("--config", fl.config, "Profile config file (flags override its fields)");
    app.add_option("--ird-hist", fl.ird_hist, "Empirical IRD histogram CSV to use as f");
    app.add_option("--irm-hist", fl.irm_hist, "Empirical popularity counts CSV to use as g");
    app.add_option("--seed", fl.seed, "RNG seed, or 'random' (default: a fixed constant)");
    app.add_option("--sizedist", fl.sizedist, "Request sizes in blocks: WEIGHTS:VALUES, e.g. 1,1,1:1,3,4");
    fl.rw_opt = app.add_option("--rw", fl.rw, "Read fraction")->check(CLI::Range(0.0, 1.0));
    fl.universe_opt = app.add_option("--universe", fl.universe, "IRM universe size (default: m)");
    app.add_flag("--overlap", fl.overlap, "Let IRM ids share the dependent address space");
    app.add_option("-o", fl.output, "Output path (default: trace.<format>)");
    app.add_option("--format", fl.format, "Output format")->check(CLI::IsMember({"parda", "spc"}));
    app.add_option("--block-size", fl.block_size, "SPC block size in bytes")->check(CLI::PositiveNumber);

    std::string in_path, in_format = "auto", out_path;
    std::uint32_t in_block = kDefaultBlockSize;
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("trace", in_path, "Input trace")->required();
        sub->add_option("--format", in_format, "Input format (default: by extension)")
            ->check(CLI::IsMember({"auto", "parda", "spc"}));
        sub->add_option("--block-size", in_block, "SPC block size in bytes")->check(CLI::PositiveNumber);
        sub->add_option("-o", out_path, "Output CSV (default: stdout)");
    };

    std::size_t log_bins = 64;
    auto* ird = app.add_subcommand("ird", "IRD histogram as CSV: ird_lo,ird_hi,count");
    add_input(ird);
    ird->add_option("--log-bins", log_bins, "Log-spaced bins above IRD 1024");

    std::string policy_name = "lru", sizes_text = "auto";
    unsigned threads = 0;
    auto* hrc = app.add_subcommand("hrc", "Simulated HRC as CSV: cache_size,normalized_size,hit_ratio");
    add_input(hrc);
    hrc->add_option("--policy", policy_name, "lru, fifo, clock or lfu");
    hrc->add_option("--sizes", sizes_text,
                    "Comma-separated cache sizes, 'all' (every size, LRU only) or 'auto' (LRU: all, else 64 "
                    "geometric sizes)");
    hrc->add_option("--threads", threads, "Worker threads for non-LRU policies (0 = all cores)");

    auto* predict = app.add_subcommand("predict", "Che/AET predicted LRU HRC from the trace's IRDs");
    add_input(predict);

    std::string mae_a, mae_b;
    std::size_t mae_points = 100;
    auto* mae = app.add_subcommand("mae", "Mean absolute error between two HRC CSVs over normalized size");
    mae->add_option("a", mae_a, "First curve CSV")->required();
    mae->add_option("b", mae_b, "Second curve CSV")->required();
    mae->add_option("--points", mae_points, "Evenly spaced normalized sizes in (0, 1]")->check(CLI::PositiveNumber);

    auto* footprint = app.add_subcommand("footprint", "Distinct items and length as JSON");
    add_input(footprint);

    std::vector<const char*> cargv;
    for (const auto& a : argv) cargv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "trace-gen: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*ird) {
            const auto refs = load_refs(in_path, in_format, in_block);
            const auto hist = measure_ird(refs, log_bins);
            emit(out_path, out, [&](std::ostream& o) { write_ird_csv(hist, o); });
        } else if (*hrc) {
            const auto policy = parse_policy(policy_name);
            const auto refs = load_refs(in_path, in_format, in_block);
            HitRatioCurve curve;
            if (sizes_text == "all" || (sizes_text == "auto" && policy == Policy::Lru)) {
                if (policy != Policy::Lru) throw UsageError("--sizes all is only available for lru");
                curve = exact_lru_hrc(refs);
            } else {
                const auto sizes = sizes_text == "auto" ? geometric_sizes(measure_footprint(refs).distinct)
                                                        : parse_sizes(sizes_text);
                curve = simulate_hrc(refs, policy, sizes, threads);
            }
            emit(out_path, out, [&](std::ostream& o) { write_hrc_csv(curve, o); });
        } else if (*predict) {
            const auto refs = load_refs(in_path, in_format, in_block);
            const auto curve = che_predict(measure_ird(refs));
            emit(out_path, out, [&](std::ostream& o) { write_prediction_csv(curve, o); });
        } else if (*mae) {
            const auto a = read_hrc_csv(std::filesystem::path(mae_a));
            const auto b = read_hrc_csv(std::filesystem::path(mae_b));
            std::vector<double> grid(mae_points);
            for (std::size_t i = 0; i < mae_points; ++i)
                grid[i] = static_cast<double>(i + 1) / static_cast<double>(mae_points);
            out << format_double(hrc_mae(a, b, grid)) << '\n';
        } else if (*footprint) {
            const auto fp = measure_footprint(load_refs(in_path, in_format, in_block));
            out << nlohmann::ordered_json{{"footprint", fp.distinct}, {"length", fp.length}}.dump() << '\n';
        } else {
            return cmd_generate(fl, out, err);
        }
        return kOk;
    } catch (const UsageError& e) {
        err << "trace-gen: " << e.what() << "\n";
        return kUsage;
    } catch (const ProfileError& e) {
        err << "trace-gen: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        err << "trace-gen: " << e.what() << "\n";
        return kValidation;
    } catch (const IoError& e) {
        err << "trace-gen: " << e.what() << "\n";
        return kIo;
    }
}

}  // namespace tracegen::cli
