#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace proxnas {

// Shortest decimal string that round-trips to the same binary64 value.
std::string fmt_double(double v);
// Fixed 17-significant-digit form used by the matrix text format.
std::string fmt_double17(double v);
std::string fmt_u64(std::uint64_t v);

// Strict parsers: the whole token must be consumed.
double parse_double(std::string_view s, bool& ok);
std::int64_t parse_int(std::string_view s, bool& ok);
std::uint64_t parse_u64(std::string_view s, bool& ok);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Flat "key = value" documents (dataset manifests, checkpoints, reports).
using KvPairs = std::vector<std::pair<std::string, std::string>>;
void write_kv_file(const std::filesystem::path& path, const KvPairs& kv);
KvPairs read_kv_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace proxnas
