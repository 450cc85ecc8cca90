#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "scientist/pipeline/config.hpp"

namespace scientist::testkit {

// Relative path -> content for every regular file under `root`. The root path
// itself is replaced by "<root>", wall-clock durations are zeroed and the
// transcript source is masked, so two runs in different directories compare
// equal when they did the same work.
std::map<std::string, std::string> snapshot_tree(const std::filesystem::path& root);

// First difference between two snapshots, or empty when they are equal.
std::string diff_trees(const std::map<std::string, std::string>& a, const std::map<std::string, std::string>& b);

// Writes stub_config_yaml next to `output_dir` and loads it.
pipeline::RunConfig stub_config(const std::filesystem::path& output_dir, int idea_count,
                                const std::string& extra = {}, const std::filesystem::path& replay_path = {});

}  // namespace scientist::testkit
