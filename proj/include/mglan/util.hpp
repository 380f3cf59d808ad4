#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mglan {

/// FNV-1a over raw bytes. Used for artifact staleness checks, not security.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t hash_file(const std::filesystem::path& path);
std::string hash_hex(std::uint64_t h);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Shortest round-trip decimal form of a double ("%.17g" trimmed).
std::string format_double(double v);

std::vector<std::string> split_ws(std::string_view s);
std::string to_lower(std::string_view s);

}  // namespace mglan
