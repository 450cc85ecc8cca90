#include "scientist/lab/template.hpp"

#include <nlohmann/json.hpp>

#include "scientist/util/fs.hpp"
#include "scientist/util/text.hpp"

namespace scientist::lab {

namespace fs = std::filesystem;

TemplateManifest load_template(const fs::path& dir) {
  auto manifest_path = dir / "template.json";
  if (!fs::exists(manifest_path)) throw TemplateError("template manifest missing: " + manifest_path.string());
  auto j = nlohmann::json::parse(fsx::read_file(manifest_path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw TemplateError("template manifest is not a JSON object");

  TemplateManifest m;
  m.root = fs::absolute(dir);
  m.name = j.value("name", dir.filename().string());
  m.task_description = j.value("task_description", std::string{});
  if (j.contains("task_description_file")) {
    m.task_description = fsx::read_file(dir / j["task_description_file"].get<std::string>());
  }
  m.command = j.value("command", m.command);
  m.plot_command = j.value("plot_command", m.plot_command);
  if (j.contains("files")) {
    const auto& f = j["files"];
    m.experiment_file = f.value("experiment", m.experiment_file);
    m.plot_file = f.value("plot", m.plot_file);
    m.latex_dir = f.value("latex_dir", m.latex_dir);
    m.seed_ideas_file = f.value("seed_ideas", m.seed_ideas_file);
    m.baseline_results_file = f.value("baseline_results", m.baseline_results_file);
    m.notes_file = f.value("notes", m.notes_file);
  }
  if (j.contains("timeouts")) {
    const auto& t = j["timeouts"];
    if (t.contains("experiment_s")) m.experiment_timeout_s = t["experiment_s"].get<int>();
    if (t.contains("plot_s")) m.plot_timeout_s = t["plot_s"].get<int>();
  }
  validate_template(m);
  return m;
}

void validate_template(const TemplateManifest& m) {
  std::vector<std::string> problems;
  if (text::trim(m.task_description).empty()) problems.push_back("task description is empty");
  if (m.command.find("{out_dir}") == std::string::npos) {
    problems.push_back("command template lacks the {out_dir} placeholder");
  }
  for (const auto& f : {m.experiment_file, m.plot_file, m.seed_ideas_file, m.baseline_results_file}) {
    if (!fs::is_regular_file(m.path_of(f))) problems.push_back("missing file " + f);
  }
  if (!fs::is_regular_file(m.path_of(m.latex_dir) / "template.tex")) {
    problems.push_back("missing file " + m.latex_dir + "/template.tex");
  }
  if (!problems.empty()) throw TemplateError("invalid template '" + m.name + "': " + text::join(problems, "; "));
}

}  // namespace scientist::lab
