#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace domforge::util {

/// Hex-encoded SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Splits into lines, each keeping its trailing '\n' (the last line may not
/// have one). Concatenating the result reproduces the input byte-exactly.
std::vector<std::string_view> split_lines_keep_ends(std::string_view text);

/// Leading spaces/tabs of a line.
std::string_view leading_indent(std::string_view line);

std::string lower_first(std::string s);
std::string upper_first(std::string s);

/// Collapses every run of whitespace to a single space and trims the ends.
std::string collapse_whitespace(std::string_view text);

/// First sentence of `text`: everything up to and including the first '.'
/// that ends a word (followed by whitespace or end). Whole text if none.
std::string_view first_sentence(std::string_view text);

/// Shell-style glob match supporting '*', '?' and character classes.
bool glob_match(std::string_view pattern, std::string_view name);

/// xorshift-free deterministic shuffle: same result on every platform,
/// unlike std::shuffle whose distribution is implementation-defined.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform-ish value in [0, bound) via modulo; bound > 0.
    std::uint64_t bounded(std::uint64_t bound);

  private:
    std::uint64_t state_;
};

template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::uint64_t seed) {
    SplitMix64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace domforge::util
