#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace cotclinic {

// -- deterministic hashing / seeding -----------------------------------------

std::uint64_t splitmix64(std::uint64_t x);

// Combine a base seed with a stream index; used everywhere a derived seed
// must be stable across platforms and runs.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// FNV-1a over bytes; content keys for caches and config hashes.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// -- portable randomness -------------------------------------------------------
// std::uniform_int_distribution is implementation-defined, so bounded draws
// go through these helpers; mt19937_64 itself is pinned by the standard.

std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t n);  // [0, n)
double rng_unit(std::mt19937_64& rng);                           // [0, 1)
double rng_gaussian(std::mt19937_64& rng);                       // Box-Muller N(0,1)

// -- string helpers -------------------------------------------------------------

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Whitespace-delimited word count; empty text counts as zero.
std::size_t whitespace_token_count(std::string_view text);
std::vector<std::string> whitespace_tokens(std::string_view text);

// Maximal digit runs in order of appearance, kept verbatim (no zero
// stripping) so "02" and "2" stay distinct tokens.
std::vector<std::string> extract_digit_runs(std::string_view text);

// True when `small` is contained in `big` under multiset semantics.
bool multiset_contains(const std::vector<std::string>& big,
                       const std::vector<std::string>& small);

bool multiset_disjoint(const std::vector<std::string>& a,
                       const std::vector<std::string>& b);

// -- small file helpers ------------------------------------------------------------

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);
void append_text_file(const std::string& path, std::string_view content);

}  // namespace cotclinic
