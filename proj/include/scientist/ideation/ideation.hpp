#pragma once

#include <string>

#include "scientist/ideation/idea.hpp"
#include "scientist/literature/search.hpp"
#include "scientist/llm/gateway.hpp"

namespace scientist::ideation {

class IdeaGenerationFailed : public Error {
public:
  using Error::Error;
};

struct IdeationContext {
  llm::Gateway& gateway;
  llm::ModelSettings model;
  std::string task_description;
  std::string code;  // the template's experiment entry file
  llm::TranscriptWriter* transcript = nullptr;
};

struct GenerationStats {
  int calls = 0;
  int rounds_used = 0;
};

// Generates one idea conditioned on the whole archive, refined for up to
// `reflections` rounds. The archive is not modified; the returned idea's name
// is already unique against it.
Idea generate_idea(const IdeaArchive& archive, const IdeationContext& ctx, int reflections = 3,
                   GenerationStats* stats = nullptr);

struct NoveltyStats {
  int calls = 0;
  int searches = 0;
  int rounds = 0;
};

// Literature dialogue of at most `rounds` model calls and searches. Returns
// the idea with novel set; running out of rounds without a decision, or a
// reply that stays malformed, yields not_novel.
Idea check_novelty(Idea idea, const IdeationContext& ctx, literature::LiteratureClient& search,
                   int rounds = 10, NoveltyStats* stats = nullptr);

}  // namespace scientist::ideation
