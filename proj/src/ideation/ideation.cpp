#include "scientist/ideation/ideation.hpp"

#include "scientist/prompts.hpp"
#include "scientist/protocol/reflection.hpp"
#include "scientist/util/text.hpp"

namespace scientist::ideation {

using protocol::Envelope;
using protocol::ProtocolError;

Idea generate_idea(const IdeaArchive& archive, const IdeationContext& ctx, int reflections,
                   GenerationStats* stats) {
  if (archive.ideas.empty()) throw IdeaGenerationFailed("idea archive has no seed ideas");
  llm::Conversation conv(ctx.gateway, ctx.model, std::string(prompts::kIdeaSystem), ctx.transcript);
  auto ask = [&](const std::string& m) { return conv.ask(m); };
  const auto num_reflections = std::to_string(reflections);

  try {
    auto seed = conv.ask(text::fill(prompts::kIdeaGeneration,
                                    {{"task_description", ctx.task_description},
                                     {"code", ctx.code},
                                     {"prev_ideas_string", archive.render_for_prompt()},
                                     {"num_reflections", num_reflections}}));
    protocol::ReflectionPolicy policy{std::max(1, reflections), std::string(protocol::kDefaultTerminationPhrase)};
    auto result = protocol::run_reflection_loop(
        seed, policy,
        [&](int round) {
          return text::fill(prompts::kIdeaReflection, {{"current_round", std::to_string(round)},
                                                       {"num_reflections", num_reflections}});
        },
        ask, [](const Envelope& env) { (void)idea_from_json(env.payload); });
    if (stats) {
      stats->calls = conv.calls();
      stats->rounds_used = result.rounds_used;
    }
    auto idea = idea_from_json(result.envelope.payload);
    idea.novel = Novelty::undetermined;
    idea.name = archive.unique_name(idea.name);
    return idea;
  } catch (const ProtocolError& e) {
    if (stats) stats->calls = conv.calls();
    throw IdeaGenerationFailed(std::string("idea generation failed: ") + e.what());
  }
}

namespace {

bool has_decision(const std::string& thought) {
  return thought.find(prompts::kDecisionNovel) != std::string::npos ||
         thought.find(prompts::kDecisionNotNovel) != std::string::npos;
}

void require_query(const Envelope& env) {
  if (has_decision(env.thought)) return;
  const auto& q = env.payload;
  if (!q.contains("Query") || !q["Query"].is_string() || text::trim(q["Query"].get<std::string>()).empty()) {
    throw ProtocolError(ProtocolError::Kind::schema,
                        "no decision was made, so \"Query\" must be a non-empty string");
  }
}

}  // namespace

Idea check_novelty(Idea idea, const IdeationContext& ctx, literature::LiteratureClient& search,
                   int rounds, NoveltyStats* stats) {
  NoveltyStats local;
  NoveltyStats& st = stats ? *stats : local;
  llm::Conversation conv(ctx.gateway, ctx.model,
                         text::fill(prompts::kNoveltySystem, {{"num_rounds", std::to_string(rounds)},
                                                             {"task_description", ctx.task_description},
                                                             {"code", ctx.code}}),
                         ctx.transcript);
  const auto idea_text = to_json(idea).dump(4);
  std::string last_results;

  auto finish = [&](Novelty verdict) {
    idea.novel = verdict;
    st.calls = conv.calls();
    return idea;
  };

  for (int round = 1; round <= rounds && conv.calls() < rounds; ++round) {
    st.rounds = round;
    auto response = conv.ask(text::fill(prompts::kNoveltyRound, {{"current_round", std::to_string(round)},
                                                                 {"num_rounds", std::to_string(rounds)},
                                                                 {"idea", idea_text},
                                                                 {"last_query_results", last_results}}));
    Envelope env;
    try {
      env = protocol::parse_envelope(response);
      require_query(env);
    } catch (const ProtocolError& first) {
      if (conv.calls() >= rounds) return finish(Novelty::not_novel);
      try {
        env = protocol::parse_envelope(conv.ask(protocol::format_fix_prompt(first)));
        require_query(env);
      } catch (const ProtocolError&) {
        return finish(Novelty::not_novel);
      }
    }
    if (env.thought.find(prompts::kDecisionNotNovel) != std::string::npos) return finish(Novelty::not_novel);
    if (env.thought.find(prompts::kDecisionNovel) != std::string::npos) return finish(Novelty::novel);

    ++st.searches;
    try {
      last_results = literature::render_results_for_prompt(
          search.search({env.payload["Query"].get<std::string>(), 10}));
    } catch (const Error& e) {
      last_results = std::string("The search failed: ") + e.what();
    }
  }
  return finish(Novelty::not_novel);
}

}  // namespace scientist::ideation
