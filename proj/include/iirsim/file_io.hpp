#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace iirsim {

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace iirsim
