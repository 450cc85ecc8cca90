#include "scientist/edit/session.hpp"

#include <filesystem>

#include "scientist/prompts.hpp"
#include "scientist/util/text.hpp"

namespace scientist::edit {

EditSession::EditSession(llm::Gateway& gateway, llm::ModelSettings settings, Workspace workspace,
                         std::vector<std::string> chat_files, llm::TranscriptWriter* transcript,
                         EditSessionOptions options, std::string system_prompt)
    : workspace_(std::move(workspace)),
      chat_files_(std::move(chat_files)),
      options_(options),
      conversation_(gateway, std::move(settings),
                    system_prompt.empty() ? std::string(prompts::kCoderSystem) : std::move(system_prompt),
                    transcript) {}

std::string EditSession::file_context(const std::vector<std::string>& files) const {
  std::string out;
  for (const auto& f : files) {
    std::filesystem::path abs;
    try {
      abs = workspace_.resolve(f);
    } catch (const PathEscape&) {
      continue;
    }
    if (!std::filesystem::is_regular_file(abs)) {
      out += f + " (does not exist yet)\n\n";
      continue;
    }
    if (std::filesystem::file_size(abs) > options_.file_budget_bytes) {
      out += f + " (too large to show)\n\n";
      continue;
    }
    auto content = workspace_.read(f);
    out += f + "\n```\n" + content;
    if (!content.empty() && content.back() != '\n') out += '\n';
    out += "```\n\n";
  }
  return out;
}

EditOutcome EditSession::request_edit(const std::string& instruction, int max_repair_rounds) {
  EditOutcome total;
  std::string message = instruction;
  if (!chat_files_.empty()) message += "\n\nThe current files are:\n\n" + file_context(chat_files_);

  std::vector<FailedEdit> last_failed;
  std::string last_parse_error;
  for (int round = 0; round <= max_repair_rounds; ++round) {
    last_response_ = conversation_.ask(message);
    std::vector<EditBlock> blocks;
    try {
      blocks = parse_edit_blocks(last_response_);
    } catch (const EditParseError& e) {
      last_parse_error = e.what();
      last_failed.clear();
      message = text::fill(prompts::kEditFailure,
                           {{"failures", std::string("Your reply could not be parsed: ") + e.what()}});
      continue;
    }
    last_parse_error.clear();
    auto outcome = apply_edits(workspace_, blocks, options_.snapshot);
    total.applied.insert(total.applied.end(), outcome.applied.begin(), outcome.applied.end());
    if (outcome.ok()) return total;

    last_failed = outcome.failed;
    std::vector<std::string> failed_files;
    for (const auto& f : outcome.failed) {
      if (std::find(failed_files.begin(), failed_files.end(), f.block.file_path) == failed_files.end()) {
        failed_files.push_back(f.block.file_path);
      }
    }
    message = text::fill(prompts::kEditFailure, {{"failures", describe_failures(outcome.failed)}}) +
              "\n\nThe current contents of the affected files are:\n\n" + file_context(failed_files);
  }
  total.failed = last_failed;
  std::string why = last_parse_error.empty() ? describe_failures(last_failed) : last_parse_error;
  throw EditExhausted("edit rounds exhausted with failures outstanding:\n" + why, std::move(total));
}

}  // namespace scientist::edit
