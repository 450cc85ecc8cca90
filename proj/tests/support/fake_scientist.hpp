#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>

#include "scientist/llm/backend.hpp"

namespace scientist::testkit {

// Knobs of the scripted model. Rounds are 1-based; 0 means never.
struct Script {
  int idea_done_round = 2;
  int novelty_decide_round = 2;
  int runs_before_complete = 2;
  int citation_queries = 1;
  int review_done_round = 2;
  int review_overall_base = 4;
  bool inject_compile_error = true;
  bool repair_compile_error = true;
  bool cite_in_results = true;
};

// Deterministic stand-in for a chat model that plays every pipeline role.
// Replies depend only on the request, so recorded transcripts replay exactly.
class FakeScientist : public llm::Backend {
public:
  explicit FakeScientist(Script script = {}) : script_(script) {}

  llm::Completion complete(const llm::CompletionRequest& request) override;

  // Calls per role, e.g. "idea", "idea_reflection", "novelty", "coder", "review".
  std::map<std::string, int> counts() const;
  int count(const std::string& role) const;

private:
  std::string reply(const llm::CompletionRequest& request, std::string& role);

  Script script_;
  mutable std::mutex mu_;
  std::map<std::string, int> counts_;
};

std::filesystem::path fixture_dir();
std::filesystem::path stub_template_dir();
std::filesystem::path literature_fixture_dir();
std::filesystem::path fake_tex_script();

// Fresh directory under the system temp dir.
std::filesystem::path make_temp_dir(const std::string& prefix);

// Run config YAML for the stub template wired to the fake toolchain. The
// replay path defaults to <parent of output_dir>/replay; it is only read when
// no backend is injected.
std::string stub_config_yaml(const std::filesystem::path& output_dir, int idea_count,
                             const std::string& extra = {}, const std::filesystem::path& replay_path = {});

}  // namespace scientist::testkit
