#include "scientist/edit/workspace.hpp"

#include "scientist/util/fs.hpp"

namespace scientist::edit {

namespace fs = std::filesystem;

Workspace::Workspace(fs::path root) {
  fs::create_directories(root);
  root_ = fs::canonical(root);
}

fs::path Workspace::resolve(std::string_view relative) const {
  if (relative.empty()) throw PathEscape("empty path");
  if (relative.find('\0') != std::string_view::npos) throw PathEscape("path contains NUL");
  fs::path rel{std::string(relative)};
  if (rel.is_absolute() || rel.has_root_name() || relative.front() == '/') {
    throw PathEscape("absolute path not allowed: " + std::string(relative));
  }
  auto norm = rel.lexically_normal();
  if (norm.empty() || norm == ".") throw PathEscape("path names the workspace root");
  auto first = norm.begin()->string();
  if (first == "..") throw PathEscape("path escapes workspace: " + std::string(relative));
  if (first == kSnapshotDir) throw PathEscape("snapshot directory is read-only");
  if (norm.filename().empty()) throw PathEscape("path names a directory: " + std::string(relative));

  auto current = root_;
  for (const auto& part : norm) {
    current /= part;
    std::error_code ec;
    if (fs::is_symlink(fs::symlink_status(current, ec))) {
      throw PathEscape("path crosses a symlink: " + std::string(relative));
    }
  }
  return current;
}

bool Workspace::exists(std::string_view relative) const {
  return fs::is_regular_file(resolve(relative));
}

std::string Workspace::read(std::string_view relative) const {
  return fsx::read_file(resolve(relative));
}

void Workspace::write(std::string_view relative, std::string_view contents) const {
  fsx::write_file_atomic(resolve(relative), contents);
}

}  // namespace scientist::edit
