#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace scientist::ideation {

enum class Novelty { undetermined, novel, not_novel };

struct Idea {
  std::string name;
  std::string title;
  std::string experiment;
  int interestingness = 1;
  int feasibility = 1;
  int novelty_score = 1;
  Novelty novel = Novelty::undetermined;

  bool operator==(const Idea&) const = default;
};

// Lowercase letters, digits and underscores; non-empty.
bool valid_idea_name(std::string_view name);

// Archive record in field order Name, Title, Experiment, Interestingness,
// Feasibility, Novelty, then "novel" once decided.
nlohmann::ordered_json to_json(const Idea& idea);

// Throws protocol::ProtocolError(schema) on a missing field, a bad name, or a
// score outside [1,10]. Unknown fields are ignored.
Idea idea_from_json(const nlohmann::json& record);

class IdeaArchive {
public:
  std::vector<Idea> ideas;
  int seed_count = 0;

  bool contains(std::string_view name) const;
  // `base`, or `base_2`, `base_3`, ... whichever is first unused.
  std::string unique_name(const std::string& base) const;
  // Appends with name disambiguation; returns the stored name.
  std::string append(Idea idea);
  // Records joined by blank lines, oldest first.
  std::string render_for_prompt() const;
  std::size_t generated_count() const { return ideas.size() - static_cast<std::size_t>(seed_count); }
};

// ideas.json: {"seed_count": k, "ideas": [...]}
void save_archive(const IdeaArchive& archive, const std::filesystem::path& path);
IdeaArchive load_archive(const std::filesystem::path& path);

// A template's seed file: a JSON array of idea records.
IdeaArchive load_seed_ideas(const std::filesystem::path& path);

}  // namespace scientist::ideation
