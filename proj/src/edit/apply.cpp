#include "scientist/edit/apply.hpp"

#include <map>
#include <optional>
#include <set>

#include "scientist/util/fs.hpp"
#include "scientist/util/text.hpp"

namespace scientist::edit {

namespace fs = std::filesystem;

namespace {

int next_generation(const fs::path& snapshot_root) {
  int highest = 0;
  std::error_code ec;
  if (!fs::exists(snapshot_root, ec)) return 1;
  for (const auto& e : fs::directory_iterator(snapshot_root)) {
    try {
      highest = std::max(highest, std::stoi(e.path().filename().string()));
    } catch (...) {
    }
  }
  return highest + 1;
}

class Snapshotter {
public:
  Snapshotter(const Workspace& ws, bool enabled) : ws_(ws), enabled_(enabled) {}

  void before_write(const std::string& rel, const fs::path& abs) {
    if (!enabled_ || !seen_.insert(rel).second) return;
    if (!generation_dir_) {
      char name[16];
      std::snprintf(name, sizeof name, "%04d", next_generation(ws_.snapshot_root()));
      generation_dir_ = ws_.snapshot_root() / name;
      fs::create_directories(*generation_dir_);
    }
    if (fs::exists(abs)) {
      auto target = *generation_dir_ / fs::path(rel).lexically_normal();
      fs::create_directories(target.parent_path());
      fs::copy_file(abs, target, fs::copy_options::overwrite_existing);
    }
  }

private:
  const Workspace& ws_;
  bool enabled_;
  std::set<std::string> seen_;
  std::optional<fs::path> generation_dir_;
};

}  // namespace

EditOutcome apply_edits(const Workspace& workspace, const std::vector<EditBlock>& blocks,
                        bool snapshot) {
  EditOutcome outcome;
  Snapshotter snapshots(workspace, snapshot);
  for (const auto& block : blocks) {
    fs::path abs;
    try {
      abs = workspace.resolve(block.file_path);
    } catch (const PathEscape& e) {
      outcome.failed.push_back({block, e.what()});
      continue;
    }
    bool exists = fs::is_regular_file(abs);
    if (fs::exists(abs) && !exists) {
      outcome.failed.push_back({block, "not a regular file"});
      continue;
    }
    std::string content = exists ? fsx::read_file(abs) : std::string{};

    if (block.search.empty()) {
      if (exists && !content.empty()) {
        outcome.failed.push_back({block, "empty search on a non-empty file"});
        continue;
      }
      snapshots.before_write(block.file_path, abs);
      fsx::write_file_atomic(abs, block.replace);
      outcome.applied.push_back({block.file_path, 0});
      continue;
    }
    if (!exists) {
      outcome.failed.push_back({block, "file not found"});
      continue;
    }
    auto n = text::count_occurrences(content, block.search);
    if (n == 0) {
      outcome.failed.push_back({block, "not found"});
      continue;
    }
    if (n > 1) {
      outcome.failed.push_back({block, "ambiguous: search text occurs " + std::to_string(n) + " times"});
      continue;
    }
    auto offset = content.find(block.search);
    content.replace(offset, block.search.size(), block.replace);
    snapshots.before_write(block.file_path, abs);
    fsx::write_file_atomic(abs, content);
    outcome.applied.push_back({block.file_path, offset});
  }
  return outcome;
}

std::string describe_failures(const std::vector<FailedEdit>& failed) {
  std::string out;
  for (const auto& f : failed) {
    if (!out.empty()) out += "\n\n";
    out += "## SearchReplaceFailed in " + f.block.file_path + ": " + f.reason + "\n";
    out += std::string(kSearchMarker) + "\n" + f.block.search + std::string(kDividerMarker) + "\n" +
           f.block.replace + std::string(kReplaceMarker);
  }
  return out;
}

}  // namespace scientist::edit
