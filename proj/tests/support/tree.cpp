#include "tree.hpp"

#include <regex>

#include "fake_scientist.hpp"
#include "scientist/util/fs.hpp"

namespace fs = std::filesystem;

namespace scientist::testkit {

namespace {

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  if (from.empty()) return;
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

}  // namespace

std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
  static const std::regex duration(R"("duration_s":\s*[-+0-9.eE]+)");
  static const std::regex replay(R"("replay_path":\s*"[^"]*")");
  std::map<std::string, std::string> out;
  auto canonical = fs::weakly_canonical(root).string();
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    auto content = fsx::read_file(e.path());
    replace_all(content, canonical, "<root>");
    replace_all(content, root.string(), "<root>");
    content = std::regex_replace(content, duration, "\"duration_s\": 0");
    content = std::regex_replace(content, replay, "\"replay_path\": \"<replay>\"");
    out[fs::relative(e.path(), root).generic_string()] = std::move(content);
  }
  return out;
}

std::string diff_trees(const std::map<std::string, std::string>& a, const std::map<std::string, std::string>& b) {
  for (const auto& [path, content] : a) {
    auto it = b.find(path);
    if (it == b.end()) return "only in first: " + path;
    if (it->second != content) {
      std::size_t i = 0;
      while (i < content.size() && i < it->second.size() && content[i] == it->second[i]) ++i;
      auto from = i < 40 ? 0 : i - 40;
      return "differs: " + path + " near \"" + content.substr(from, 80) + "\" vs \"" + it->second.substr(from, 80) + "\"";
    }
  }
  for (const auto& [path, _] : b) {
    if (!a.count(path)) return "only in second: " + path;
  }
  return {};
}

pipeline::RunConfig stub_config(const fs::path& output_dir, int idea_count, const std::string& extra,
                                const fs::path& replay_path) {
  auto path = output_dir.parent_path() / (output_dir.filename().string() + ".yaml");
  fs::create_directories(output_dir.parent_path());
  fsx::write_file_atomic(path, stub_config_yaml(output_dir, idea_count, extra, replay_path));
  return pipeline::load_config(path);
}

}  // namespace scientist::testkit
