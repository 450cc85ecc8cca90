#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "scientist/util/error.hpp"

namespace scientist::edit {

class PathEscape : public Error {
public:
  using Error::Error;
};

inline constexpr std::string_view kSnapshotDir = ".snapshots";

// A directory tree the agent may edit. Every relative path goes through
// resolve(), which refuses anything that could land outside the root.
class Workspace {
public:
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Rejects empty and absolute paths, paths that normalize above the root,
  // the snapshot directory, and any path crossing a symlink.
  std::filesystem::path resolve(std::string_view relative) const;

  bool exists(std::string_view relative) const;
  std::string read(std::string_view relative) const;
  void write(std::string_view relative, std::string_view contents) const;

  std::filesystem::path snapshot_root() const { return root_ / kSnapshotDir; }

private:
  std::filesystem::path root_;
};

}  // namespace scientist::edit
