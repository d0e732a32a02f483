#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace polymt::io {

std::string read_file(const std::filesystem::path& path);

/// Lines without their terminators. A trailing CR is dropped so CRLF input
/// reads the same as LF; the final line may lack a newline.
std::vector<std::string> read_lines(const std::filesystem::path& path);
std::vector<std::string> split_lines(std::string_view content);

/// Writes `content` to a temporary sibling and renames it over `path`, so a
/// reader never observes a partially written file. Parent directories are
/// created as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::vector<std::string> split_fields(std::string_view line, char separator = '\t');
std::vector<std::string> split_list(std::string_view csv, char separator = ',');

/// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

}  // namespace polymt::io
