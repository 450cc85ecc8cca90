#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scientist/util/error.hpp"

namespace scientist::lab {

inline constexpr std::string_view kDefaultExperimentCommand = "python experiment.py --out_dir={out_dir}";
inline constexpr std::string_view kDefaultPlotCommand = "python plot.py";

// Contents of a template's template.json.
struct TemplateManifest {
  std::filesystem::path root;
  std::string name;
  std::string task_description;
  std::string command{kDefaultExperimentCommand};
  std::string plot_command{kDefaultPlotCommand};
  std::string experiment_file = "experiment.py";
  std::string plot_file = "plot.py";
  std::string latex_dir = "latex";
  std::string seed_ideas_file = "seed_ideas.json";
  std::string baseline_results_file = "baseline_results.txt";
  std::string notes_file = "notes.txt";
  std::optional<int> experiment_timeout_s;
  std::optional<int> plot_timeout_s;

  std::filesystem::path path_of(const std::string& rel) const { return root / rel; }
};

class TemplateError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

// Loads and validates <dir>/template.json.
TemplateManifest load_template(const std::filesystem::path& dir);

// Throws TemplateError listing every problem: missing files, a command
// without the {out_dir} placeholder, an empty task description.
void validate_template(const TemplateManifest& manifest);

}  // namespace scientist::lab
