#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sicf {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
bool is_blank(std::string_view s);

/// Lowercased alphanumeric runs. Everything else separates tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Alphanumeric runs with their original case preserved.
std::vector<std::string> word_pieces(std::string_view text);

/// Splits summary text into sentences at '.', '!' or '?' followed by
/// whitespace (or end of text). Sentences are trimmed; empty ones dropped.
std::vector<std::string> split_sentences(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t& state);
std::string hex64(std::uint64_t v);

/// floor(n * ratio), tolerant to the representation error of decimal ratios
/// (100 * 0.29 must give 29, not 28).
std::size_t budget_count(std::size_t n, double ratio);

}  // namespace sicf
