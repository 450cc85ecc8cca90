#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace scientist::fsx {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path);
// Writes through a temporary sibling and renames, so readers never see a torn file.
void write_file_atomic(const fs::path& path, std::string_view contents);
void append_file(const fs::path& path, std::string_view contents);

// Recursive copy that skips names in `exclude` at the top level.
void copy_tree(const fs::path& from, const fs::path& to,
               const std::vector<std::string>& exclude = {});

std::uintmax_t directory_size(const fs::path& dir);

// Sorted relative paths of regular files under `root`.
std::vector<std::string> list_files(const fs::path& root,
                                    const std::vector<std::string>& exclude = {});

}  // namespace scientist::fsx
