#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "coarselab/error.hpp"

namespace coarselab {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Canonical text of a JSON document (two-space indent, trailing newline).
std::string dump_json(const Json& j);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);

/// Directory for cached artifacts: $COARSELAB_CACHE or ./.coarselab-cache.
std::filesystem::path cache_dir();

}  // namespace coarselab
