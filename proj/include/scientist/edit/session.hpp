#pragma once

#include <string>
#include <vector>

#include "scientist/edit/apply.hpp"
#include "scientist/llm/gateway.hpp"

namespace scientist::edit {

class EditExhausted : public Error {
public:
  EditExhausted(const std::string& what, EditOutcome outcome)
      : Error(what), outcome_(std::move(outcome)) {}
  const EditOutcome& outcome() const { return outcome_; }

private:
  EditOutcome outcome_;
};

struct EditSessionOptions {
  // Files larger than this are listed by name only.
  std::size_t file_budget_bytes = 64 * 1024;
  bool snapshot = true;
};

// A coding-agent chat bound to one workspace. Each request shows the current
// contents of the chat files, parses the reply into edit blocks and applies
// them, feeding failures back until they are fixed or the rounds run out.
class EditSession {
public:
  EditSession(llm::Gateway& gateway, llm::ModelSettings settings, Workspace workspace,
              std::vector<std::string> chat_files, llm::TranscriptWriter* transcript = nullptr,
              EditSessionOptions options = {}, std::string system_prompt = {});

  // Sends `instruction`; up to `max_repair_rounds` follow-up messages repair
  // failed blocks. A reply with no blocks is a successful no-op. Throws
  // EditExhausted when failures remain after the last round.
  EditOutcome request_edit(const std::string& instruction, int max_repair_rounds);

  const std::string& last_response() const { return last_response_; }
  int calls() const { return conversation_.calls(); }
  const Workspace& workspace() const { return workspace_; }
  void set_chat_files(std::vector<std::string> files) { chat_files_ = std::move(files); }

  // Current contents of the chat files, formatted for a prompt.
  std::string file_context(const std::vector<std::string>& files) const;

private:
  Workspace workspace_;
  std::vector<std::string> chat_files_;
  EditSessionOptions options_;
  llm::Conversation conversation_;
  std::string last_response_;
};

}  // namespace scientist::edit
