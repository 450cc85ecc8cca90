#pragma once

#include <string_view>

// Prompt pack. Placeholders are `{name}` tokens filled with text::fill().
namespace scientist::prompts {

// Ideation
extern const std::string_view kIdeaSystem;
extern const std::string_view kIdeaGeneration;
extern const std::string_view kIdeaReflection;
extern const std::string_view kNoveltySystem;
extern const std::string_view kNoveltyRound;
inline constexpr std::string_view kDecisionNovel = "Decision made: novel.";
inline constexpr std::string_view kDecisionNotNovel = "Decision made: not novel.";

// Coding agent
extern const std::string_view kCoderSystem;
extern const std::string_view kEditFailure;

// Experiments
extern const std::string_view kExperimentPlan;
extern const std::string_view kRunSucceeded;
extern const std::string_view kRunFailed;
extern const std::string_view kPlotting;
extern const std::string_view kPlotFailed;
extern const std::string_view kPlotNotes;
inline constexpr std::string_view kExperimentsComplete = "ALL_COMPLETED";

// Write-up
extern const std::string_view kWriteupSystem;
extern const std::string_view kSectionWrite;
extern const std::string_view kSectionReflect;
extern const std::string_view kCitationQuery;
extern const std::string_view kCitationSelect;
extern const std::string_view kCitationInsert;
extern const std::string_view kSectionRefine;
extern const std::string_view kCompileRepair;
inline constexpr std::string_view kNoMoreCitations = "No more citations needed";

// Reviewer
extern const std::string_view kReviewSystem;
extern const std::string_view kReviewPrompt;
extern const std::string_view kReviewReflection;
extern const std::string_view kMetaReviewSystem;

}  // namespace scientist::prompts
