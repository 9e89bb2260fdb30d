#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tracegen/distributions.hpp"
#include "tracegen/generator.hpp"

namespace tracegen {

/// A scale-free triplet. Instantiate with m, n and a seed to get a profile.
struct ProfilePreset {
    std::string name;
    std::string description;
    double p_irm = 0.0;
    std::optional<IrmFamily> g;
    std::optional<IrdSpec> f;
    // Advisory: the smallest scale at which the preset's HRC shape is stable.
    std::uint64_t min_m = 1;
    std::uint64_t min_n = 1;

    TraceProfile instantiate(std::uint64_t m, std::uint64_t n, std::uint64_t seed = kDefaultSeed) const;
};

/// a-f defaults, w11..v827 calibrated counterfeits, and `g` for P_IRM sweeps.
const std::vector<ProfilePreset>& presets();
/// Throws ValidationError for unknown names.
const ProfilePreset& get_preset(std::string_view name);

// ---------------------------------------------------------------------------
// Value syntax shared by config files, CLI flags and the service
// ---------------------------------------------------------------------------
//
//   g:  zipf:ALPHA | pareto:ALPHA,XM | normal:MU,SIGMA | uniform
//       | empirical:C1,C2,... | none
//   f:  fgen:K:EPS:I,J,... | stepwise:W1,W2,...[,inf=W] | <preset name>
//       | empirical:LO-HI=COUNT,...[,inf=COUNT] | none
//   sizedist: W1,W2,...:V1,V2,...
//
// Errors are ParseError with the 1-based column inside the value.

std::optional<IrmFamily> parse_g(std::string_view text);
std::optional<IrdSpec> parse_f(std::string_view text);
SizeDistribution parse_sizedist(std::string_view text);

std::string render_g(const std::optional<IrmFamily>& g);
std::string render_f(const std::optional<IrdSpec>& f);
std::string render_sizedist(const SizeDistribution& sizes);

// ---------------------------------------------------------------------------
// Profile config files
// ---------------------------------------------------------------------------
//
// One `key = value` per line; `#` starts a comment; blank lines are ignored.
// Keys: p_irm, g, f, m, n, seed, universe, overlap (true|false),
// read_fraction, sizedist. Each key may appear once; missing keys keep the
// TraceProfile defaults. The parsed profile is validated.

TraceProfile parse_profile(std::string_view text);
std::string render_profile(const TraceProfile& profile);

}  // namespace tracegen
