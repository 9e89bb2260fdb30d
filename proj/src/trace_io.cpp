#include "tracegen/trace_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <type_traits>

#include "tracegen/errors.hpp"

namespace tracegen {

namespace {

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish_write(std::ostream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    if (s.empty()) return false;
    if constexpr (std::is_floating_point_v<T>) {
        if (s.front() == '+') s.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool is_inf(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower == "inf" || lower == "infinity";
}

bool looks_numeric(std::string_view s) {
    return !s.empty() && (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '-' ||
                          s.front() == '+' || s.front() == '.' || is_inf(s));
}

void put_u64(std::string& buf, std::uint64_t v) {
    std::array<char, 24> tmp;
    const auto [ptr, ec] = std::to_chars(tmp.data(), tmp.data() + tmp.size(), v);
    buf.append(tmp.data(), ptr);
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 32> tmp;
    const auto [ptr, ec] = std::to_chars(tmp.data(), tmp.data() + tmp.size(), v);
    return std::string(tmp.data(), ptr);
}

// ---------------------------------------------------------------------------
// PARDA
// ---------------------------------------------------------------------------

void write_parda(const Trace& trace, std::ostream& out) {
    constexpr std::size_t kChunk = 1 << 16;
    std::vector<unsigned char> buf;
    buf.reserve(kChunk * 8);
    for (std::size_t j = 0; j < trace.refs.size(); ++j) {
        const std::uint64_t v = trace.refs[j];
        for (int b = 0; b < 8; ++b) buf.push_back(static_cast<unsigned char>(v >> (8 * b)));
        if (buf.size() == buf.capacity()) {
            out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void write_parda(const Trace& trace, const std::filesystem::path& path) {
    auto out = open_out(path, std::ios::binary);
    write_parda(trace, out);
    finish_write(out, path);
}

Trace read_parda(std::istream& in) {
    Trace trace;
    std::array<unsigned char, 8 * 4096> buf;
    std::uint64_t offset = 0;
    std::size_t carry = 0;
    while (in) {
        in.read(reinterpret_cast<char*>(buf.data() + carry), static_cast<std::streamsize>(buf.size() - carry));
        const auto got = static_cast<std::size_t>(in.gcount());
        const std::size_t avail = carry + got;
        const std::size_t whole = avail / 8 * 8;
        for (std::size_t i = 0; i < whole; i += 8) {
            std::uint64_t v = 0;
            for (int b = 7; b >= 0; --b) v = (v << 8) | buf[i + static_cast<std::size_t>(b)];
            trace.refs.push_back(v);
        }
        offset += whole;
        carry = avail - whole;
        std::copy(buf.begin() + static_cast<std::ptrdiff_t>(whole), buf.begin() + static_cast<std::ptrdiff_t>(avail),
                  buf.begin());
        if (got == 0) break;
    }
    if (in.bad()) throw IoError("read error in PARDA stream");
    if (carry != 0)
        throw FormatError("truncated PARDA record at byte offset " + std::to_string(offset) + " (" +
                              std::to_string(carry) + " trailing bytes)",
                          offset);
    return trace;
}

Trace read_parda(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    return read_parda(in);
}

// ---------------------------------------------------------------------------
// SPC
// ---------------------------------------------------------------------------

void write_spc(const Trace& trace, std::ostream& out, std::uint32_t block_size) {
    if (block_size == 0) throw ValidationError("block size must be >= 1");
    std::string line;
    std::array<char, 64> tmp;
    for (std::size_t j = 0; j < trace.refs.size(); ++j) {
        const std::uint64_t blocks = trace.sizes.empty() ? 1 : trace.sizes[j];
        const bool write = !trace.ops.empty() && trace.ops[j] == Op::Write;
        const double ts = trace.timestamps.empty() ? static_cast<double>(j) : trace.timestamps[j];
        line.clear();
        line += "0,";
        put_u64(line, trace.refs[j]);
        line += ',';
        put_u64(line, blocks * block_size);
        line += write ? ",w," : ",r,";
        const auto [ptr, ec] = std::to_chars(tmp.data(), tmp.data() + tmp.size(), ts, std::chars_format::fixed, 6);
        line.append(tmp.data(), ptr);
        line += '\n';
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
}

void write_spc(const Trace& trace, const std::filesystem::path& path, std::uint32_t block_size) {
    auto out = open_out(path);
    write_spc(trace, out, block_size);
    finish_write(out, path);
}

Trace read_spc(std::istream& in, std::uint32_t block_size) {
    if (block_size == 0) throw ValidationError("block size must be >= 1");
    Trace trace;
    std::string raw;
    std::uint64_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;
        const auto f = split_csv(line);
        auto fail = [&](const std::string& what) -> FormatError {
            return FormatError("SPC line " + std::to_string(line_no) + ": " + what, line_no);
        };
        if (f.size() != 5) throw fail("expected 5 fields, got " + std::to_string(f.size()));
        std::uint64_t asu = 0, lba = 0, bytes = 0;
        double ts = 0.0;
        if (!parse_number(f[0], asu)) throw fail("bad ASU '" + std::string(f[0]) + "'");
        if (!parse_number(f[1], lba)) throw fail("bad LBA '" + std::string(f[1]) + "'");
        if (!parse_number(f[2], bytes)) throw fail("bad size '" + std::string(f[2]) + "'");
        if (bytes < block_size || bytes % block_size != 0)
            throw fail("size " + std::to_string(bytes) + " is not a positive multiple of the block size " +
                       std::to_string(block_size));
        const std::uint64_t blocks = bytes / block_size;
        if (blocks > UINT32_MAX) throw fail("request too large");
        Op op;
        if (f[3] == "r" || f[3] == "R") op = Op::Read;
        else if (f[3] == "w" || f[3] == "W") op = Op::Write;
        else throw fail("bad opcode '" + std::string(f[3]) + "'");
        if (!parse_number(f[4], ts) || !(ts >= 0.0)) throw fail("bad timestamp '" + std::string(f[4]) + "'");
        trace.refs.push_back(lba);
        trace.sizes.push_back(static_cast<std::uint32_t>(blocks));
        trace.ops.push_back(op);
        trace.timestamps.push_back(ts);
    }
    if (in.bad()) throw IoError("read error in SPC stream");
    return trace;
}

Trace read_spc(const std::filesystem::path& path, std::uint32_t block_size) {
    auto in = open_in(path);
    return read_spc(in, block_size);
}

// ---------------------------------------------------------------------------
// Histogram inputs
// ---------------------------------------------------------------------------

IrdSpec parse_ird_histogram(std::istream& in) {
    std::vector<IrdRow> rows;
    double inf_count = 0.0;
    bool any = false;
    std::string raw;
    std::uint64_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto f = split_csv(line);
        auto fail = [&](const std::string& what) -> FormatError {
            return FormatError("histogram line " + std::to_string(line_no) + ": " + what, line_no);
        };
        if (!any && !looks_numeric(f[0])) {
            any = true;  // header
            continue;
        }
        any = true;
        if (f.size() != 2 && f.size() != 3) throw fail("expected 'value,count' or 'lo,hi,count'");
        double count = 0.0;
        if (!parse_number(f.back(), count)) throw fail("bad count '" + std::string(f.back()) + "'");
        if (count < 0.0) throw fail("negative count");
        if (is_inf(f[0])) {
            inf_count += count;
            continue;
        }
        IrdRow row;
        row.count = count;
        if (!parse_number(f[0], row.lo)) throw fail("bad IRD '" + std::string(f[0]) + "'");
        row.hi = row.lo;
        if (f.size() == 3 && !parse_number(f[1], row.hi)) throw fail("bad IRD '" + std::string(f[1]) + "'");
        if (row.lo == 0 || row.hi < row.lo) throw fail("IRD range must satisfy 1 <= lo <= hi");
        rows.push_back(row);
    }
    if (rows.empty() && inf_count == 0.0) throw FormatError("histogram is empty", line_no);
    try {
        return empirical_ird(std::move(rows), inf_count);
    } catch (const ValidationError& e) {
        throw FormatError(std::string("histogram: ") + e.what(), 0);
    }
}

IrdSpec load_ird_histogram(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_ird_histogram(in);
}

EmpiricalCounts parse_irm_counts(std::istream& in) {
    EmpiricalCounts out;
    bool any = false;
    std::string raw;
    std::uint64_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto f = split_csv(line);
        auto fail = [&](const std::string& what) -> FormatError {
            return FormatError("counts line " + std::to_string(line_no) + ": " + what, line_no);
        };
        if (!any && !looks_numeric(f[0])) {
            any = true;
            continue;
        }
        any = true;
        if (f.size() != 1 && f.size() != 2) throw fail("expected 'item,count' or 'count'");
        double count = 0.0;
        if (!parse_number(f.back(), count)) throw fail("bad count '" + std::string(f.back()) + "'");
        if (count < 0.0) throw fail("negative count");
        out.counts.push_back(count);
    }
    if (out.counts.empty()) throw FormatError("counts file is empty", line_no);
    double total = 0.0;
    for (double c : out.counts) total += c;
    if (!(total > 0.0)) throw FormatError("counts sum to zero", line_no);
    return out;
}

EmpiricalCounts load_irm_counts(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_irm_counts(in);
}

EmpiricalHistogram load_empirical_histogram(const std::filesystem::path& path, HistogramKind kind) {
    if (kind == HistogramKind::Ird) return load_ird_histogram(path);
    return load_irm_counts(path);
}

// ---------------------------------------------------------------------------
// CSV exports
// ---------------------------------------------------------------------------

void write_ird_csv(const IrdHistogram& hist, std::ostream& out) {
    out << "ird_lo,ird_hi,count\n";
    for (std::size_t j = 0; j < hist.counts.size(); ++j)
        if (hist.counts[j] > 0)
            out << hist.edges[j] + 1 << ',' << hist.edges[j + 1] << ',' << hist.counts[j] << '\n';
    if (hist.overflow > 0) out << hist.edges.back() + 1 << ',' << hist.max_finite << ',' << hist.overflow << '\n';
    out << "inf,inf," << hist.inf_count << '\n';
}

void write_hrc_csv(const HitRatioCurve& curve, std::ostream& out) {
    out << "cache_size,normalized_size,hit_ratio\n";
    for (const auto& p : curve.points)
        out << format_double(p.cache_size) << ',' << format_double(curve.normalized(p)) << ','
            << format_double(p.hit_ratio) << '\n';
}

void write_prediction_csv(const AetCurve& curve, std::ostream& out) {
    out << "tau,cache_size,normalized_size,hit_ratio\n";
    const double fp = static_cast<double>(curve.footprint);
    for (const auto& p : curve.points)
        out << p.tau << ',' << format_double(p.cache_size) << ','
            << format_double(fp > 0.0 ? p.cache_size / fp : 0.0) << ',' << format_double(p.hit_ratio) << '\n';
}

HitRatioCurve read_hrc_csv(std::istream& in) {
    std::string raw;
    std::uint64_t line_no = 0;
    std::size_t x_col = SIZE_MAX, y_col = SIZE_MAX, width = 0;
    HitRatioCurve curve;
    curve.policy = "csv";
    curve.footprint = 1;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (width == 0) {
            width = f.size();
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (f[i] == "normalized_size") x_col = i;
                if (f[i] == "hit_ratio") y_col = i;
            }
            if (x_col == SIZE_MAX || y_col == SIZE_MAX)
                throw FormatError("curve CSV needs 'normalized_size' and 'hit_ratio' columns", line_no);
            continue;
        }
        if (f.size() != width) throw FormatError("curve CSV line " + std::to_string(line_no) + ": wrong field count", line_no);
        HitRatioCurve::Point p;
        if (!parse_number(f[x_col], p.cache_size) || !parse_number(f[y_col], p.hit_ratio))
            throw FormatError("curve CSV line " + std::to_string(line_no) + ": bad number", line_no);
        if (!curve.points.empty() && p.cache_size <= curve.points.back().cache_size) {
            if (p.cache_size < curve.points.back().cache_size)
                throw FormatError("curve CSV line " + std::to_string(line_no) + ": sizes must increase", line_no);
            curve.points.back().hit_ratio = std::max(curve.points.back().hit_ratio, p.hit_ratio);
            continue;
        }
        curve.points.push_back(p);
    }
    if (width == 0) throw FormatError("curve CSV is empty", line_no);
    if (curve.points.empty()) throw FormatError("curve CSV has no data rows", line_no);
    return curve;
}

HitRatioCurve read_hrc_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_hrc_csv(in);
}

}  // namespace tracegen
