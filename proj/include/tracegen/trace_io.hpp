#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "tracegen/analysis.hpp"
#include "tracegen/cachesim.hpp"
#include "tracegen/distributions.hpp"
#include "tracegen/trace.hpp"

namespace tracegen {

inline constexpr std::uint32_t kDefaultBlockSize = 4096;

// ---------------------------------------------------------------------------
// PARDA: headerless little-endian u64 references
// ---------------------------------------------------------------------------

void write_parda(const Trace& trace, std::ostream& out);
void write_parda(const Trace& trace, const std::filesystem::path& path);
/// Throws FormatError, with the byte offset of the trailing partial record,
/// when the stream length is not a multiple of 8.
Trace read_parda(std::istream& in);
Trace read_parda(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// SPC: `asu,lba,size_bytes,opcode,timestamp` per request
// ---------------------------------------------------------------------------

/// ASU is always 0. Undecorated traces are written as single-block reads;
/// timestamps default to the request's position.
void write_spc(const Trace& trace, std::ostream& out, std::uint32_t block_size = kDefaultBlockSize);
void write_spc(const Trace& trace, const std::filesystem::path& path,
               std::uint32_t block_size = kDefaultBlockSize);

/// One Trace entry per record (refs = LBA, sizes in blocks, ops, timestamps).
/// Use block_refs() for the expanded per-block view.
Trace read_spc(std::istream& in, std::uint32_t block_size = kDefaultBlockSize);
Trace read_spc(const std::filesystem::path& path, std::uint32_t block_size = kDefaultBlockSize);

// ---------------------------------------------------------------------------
// Histogram inputs
// ---------------------------------------------------------------------------

/// IRD histogram CSV. Rows are `value,count` (the single IRD `value`) or
/// `lo,hi,count` (IRDs lo..hi); a row whose first field is `inf` carries the
/// count at IRD = infinity. An optional non-numeric header line is skipped.
IrdSpec parse_ird_histogram(std::istream& in);
IrdSpec load_ird_histogram(const std::filesystem::path& path);

/// Popularity counts CSV: `item,count` rows (or a single `count` column).
/// Items are ranked in file order.
EmpiricalCounts parse_irm_counts(std::istream& in);
EmpiricalCounts load_irm_counts(const std::filesystem::path& path);

using EmpiricalHistogram = std::variant<IrdSpec, EmpiricalCounts>;
enum class HistogramKind { Ird, Irm };
EmpiricalHistogram load_empirical_histogram(const std::filesystem::path& path, HistogramKind kind);

// ---------------------------------------------------------------------------
// CSV exports
// ---------------------------------------------------------------------------

/// `ird_lo,ird_hi,count` for every non-empty bin (and the overflow range),
/// then `inf,inf,<count>`.
void write_ird_csv(const IrdHistogram& hist, std::ostream& out);

/// `cache_size,normalized_size,hit_ratio`.
void write_hrc_csv(const HitRatioCurve& curve, std::ostream& out);

/// `tau,cache_size,normalized_size,hit_ratio`.
void write_prediction_csv(const AetCurve& curve, std::ostream& out);

/// Reads any CSV with `normalized_size` and `hit_ratio` columns, in any
/// order. The returned curve is already normalized: cache_size holds the
/// normalized size and footprint is 1.
HitRatioCurve read_hrc_csv(std::istream& in);
HitRatioCurve read_hrc_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal for a double, `.` separator, no locale.
std::string format_double(double v);

}  // namespace tracegen
