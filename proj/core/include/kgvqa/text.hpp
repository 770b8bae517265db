#pragma once

#include <cstdint>

#include <string>
#include <string_view>
#include <vector>

namespace kgvqa {

// Unicode-aware lower-casing of UTF-8 text ("César" -> "césar"). Invalid
// byte sequences pass through unchanged.
std::string utf8_lower(std::string_view text);

std::string_view trim(std::string_view text);

// Splits on any run of ASCII whitespace; no empty tokens.
std::vector<std::string> split_whitespace(std::string_view text);

std::vector<std::string> split(std::string_view text, char delimiter);

std::string join(const std::vector<std::string>& parts, std::string_view separator);

// RFC 3986 percent-decoding. Throws InputError on a truncated or non-hex escape.
std::string percent_decode(std::string_view text);

// FNV-1a, stable across platforms and runs (unlike std::hash).
std::uint64_t stable_hash(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace kgvqa
