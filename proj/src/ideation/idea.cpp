#include "scientist/ideation/idea.hpp"

#include <algorithm>

#include "scientist/protocol/envelope.hpp"
#include "scientist/util/error.hpp"
#include "scientist/util/fs.hpp"

namespace scientist::ideation {

using protocol::ProtocolError;

bool valid_idea_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

nlohmann::ordered_json to_json(const Idea& idea) {
  nlohmann::ordered_json j;
  j["Name"] = idea.name;
  j["Title"] = idea.title;
  j["Experiment"] = idea.experiment;
  j["Interestingness"] = idea.interestingness;
  j["Feasibility"] = idea.feasibility;
  j["Novelty"] = idea.novelty_score;
  if (idea.novel != Novelty::undetermined) j["novel"] = idea.novel == Novelty::novel;
  return j;
}

namespace {

std::string required_text(const nlohmann::json& record, const char* field) {
  if (!record.contains(field) || !record[field].is_string() ||
      record[field].get<std::string>().empty()) {
    throw ProtocolError(ProtocolError::Kind::schema,
                        std::string("idea field \"") + field + "\" must be a non-empty string");
  }
  return record[field].get<std::string>();
}

int required_score(const nlohmann::json& record, const char* field) {
  if (!record.contains(field) || !record[field].is_number()) {
    throw ProtocolError(ProtocolError::Kind::schema,
                        std::string("idea field \"") + field + "\" must be an integer from 1 to 10");
  }
  double v = record[field].get<double>();
  if (v != static_cast<int>(v) || v < 1 || v > 10) {
    throw ProtocolError(ProtocolError::Kind::schema,
                        std::string("idea field \"") + field + "\" is " + record[field].dump() +
                            ", outside the 1 to 10 range");
  }
  return static_cast<int>(v);
}

}  // namespace

Idea idea_from_json(const nlohmann::json& record) {
  if (!record.is_object()) throw ProtocolError(ProtocolError::Kind::schema, "idea must be a JSON object");
  Idea idea;
  idea.name = required_text(record, "Name");
  if (!valid_idea_name(idea.name)) {
    throw ProtocolError(ProtocolError::Kind::schema,
                        "idea Name \"" + idea.name + "\" must be lowercase with underscores only");
  }
  idea.title = required_text(record, "Title");
  idea.experiment = required_text(record, "Experiment");
  idea.interestingness = required_score(record, "Interestingness");
  idea.feasibility = required_score(record, "Feasibility");
  idea.novelty_score = required_score(record, "Novelty");
  if (record.contains("novel") && record["novel"].is_boolean()) {
    idea.novel = record["novel"].get<bool>() ? Novelty::novel : Novelty::not_novel;
  }
  return idea;
}

bool IdeaArchive::contains(std::string_view name) const {
  return std::any_of(ideas.begin(), ideas.end(), [&](const Idea& i) { return i.name == name; });
}

std::string IdeaArchive::unique_name(const std::string& base) const {
  if (!contains(base)) return base;
  for (int n = 2;; ++n) {
    auto candidate = base + "_" + std::to_string(n);
    if (!contains(candidate)) return candidate;
  }
}

std::string IdeaArchive::append(Idea idea) {
  idea.name = unique_name(idea.name);
  ideas.push_back(std::move(idea));
  return ideas.back().name;
}

std::string IdeaArchive::render_for_prompt() const {
  std::string out;
  for (std::size_t i = 0; i < ideas.size(); ++i) {
    if (i) out += "\n\n";
    out += to_json(ideas[i]).dump(4);
  }
  return out;
}

void save_archive(const IdeaArchive& archive, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["seed_count"] = archive.seed_count;
  j["ideas"] = nlohmann::ordered_json::array();
  for (const auto& idea : archive.ideas) j["ideas"].push_back(to_json(idea));
  fsx::write_file_atomic(path, j.dump(4) + "\n");
}

IdeaArchive load_archive(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(fsx::read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw IoError("corrupt idea archive " + path.string());
  IdeaArchive archive;
  archive.seed_count = j.value("seed_count", 0);
  for (const auto& record : j.at("ideas")) archive.ideas.push_back(idea_from_json(record));
  return archive;
}

IdeaArchive load_seed_ideas(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(fsx::read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_array()) throw IoError("seed idea file must be a JSON array: " + path.string());
  IdeaArchive archive;
  for (const auto& record : j) archive.append(idea_from_json(record));
  archive.seed_count = static_cast<int>(archive.ideas.size());
  return archive;
}

}  // namespace scientist::ideation
