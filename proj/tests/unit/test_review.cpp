#include <gtest/gtest.h>

#include "fake_scientist.hpp"
#include "pdf_writer.hpp"
#include "scientist/review/pdf_text.hpp"
#include "scientist/review/reviewer.hpp"
#include "scientist/util/fs.hpp"
#include "scientist/util/text.hpp"

using namespace scientist;
using namespace scientist::review;
namespace fs = std::filesystem;
using nlohmann::json;
using testkit::PdfBuilder;

namespace {

PdfError::Kind pdf_kind(const std::string& bytes) {
  try {
    extract_pdf_text_from_bytes(bytes);
  } catch (const PdfError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no PdfError";
  return PdfError::Kind::unreadable;
}

}  // namespace

TEST(PdfText, PlainAndCompressedStreams) {
  const std::string content = "BT /F1 12 Tf 72 700 Td (Hello World) Tj ET";
  EXPECT_EQ(text::trim(extract_pdf_text_from_bytes(testkit::simple_pdf(content, false))), "Hello World");
  EXPECT_EQ(text::trim(extract_pdf_text_from_bytes(testkit::simple_pdf(content, true))), "Hello World");
}

TEST(PdfText, KerningAndLineMoves) {
  auto text = extract_pdf_text_from_bytes(testkit::simple_pdf(
      "BT /F1 12 Tf 72 700 Td [(Sam) -20 (ple) -400 (text)] TJ 0 -14 Td (Next \\(line\\)) Tj T* (Third) Tj ET"));
  auto lines = text::split_lines(text::trim(text));
  ASSERT_EQ(lines.size(), 3u) << text;
  EXPECT_EQ(lines[0], "Sample text");
  EXPECT_EQ(lines[1], "Next (line)");
  EXPECT_EQ(lines[2], "Third");
}

TEST(PdfText, LigaturesWithoutToUnicode) {
  auto text = extract_pdf_text_from_bytes(
      testkit::simple_pdf("BT /F1 12 Tf (e\\016cient \\014nd \\013ort \\015y ba\\017e) Tj ET"));
  EXPECT_EQ(text::trim(text), "efficient find ffort fly baffle");
}

TEST(PdfText, ToUnicodeAndObjectStreamsAndInheritedResources) {
  PdfBuilder b;
  int catalog = b.reserve();
  int pages = b.reserve();
  int cmap = b.add_stream("",
                          "/CIDInit /ProcSet findresource begin\nbegincmap\n1 begincodespacerange\n<0000> <FFFF>\n"
                          "endcodespacerange\n2 beginbfchar\n<0001> <0048>\n<0002> <0069>\nendbfchar\n"
                          "1 beginbfrange\n<0010> <0012> <0061>\nendbfrange\nendcmap\n",
                          true);
  int font = b.add("<< /Type /Font /Subtype /Type0 /BaseFont /X /Encoding /Identity-H /ToUnicode " +
                   std::to_string(cmap) + " 0 R >>");
  int c1 = b.add_stream("", "BT /F7 10 Tf <00010002> Tj ET", true);
  int c2 = b.add_stream("", "BT /F7 10 Tf <001000110012> Tj ET", true);
  int p1 = b.add("<< /Type /Page /Parent " + std::to_string(pages) + " 0 R /Contents " + std::to_string(c1) + " 0 R >>");
  int p2 = b.add("<< /Type /Page /Parent " + std::to_string(pages) + " 0 R /Contents [" + std::to_string(c2) + " 0 R] >>");
  b.set(pages, "<< /Type /Pages /Kids [" + std::to_string(p1) + " 0 R " + std::to_string(p2) +
                   " 0 R] /Count 2 /Resources << /Font << /F7 " + std::to_string(font) + " 0 R >> >> >>");
  b.set(catalog, "<< /Type /Catalog /Pages " + std::to_string(pages) + " 0 R >>");
  auto pdf = b.build(catalog, "", {catalog, pages, font, p1, p2});
  EXPECT_EQ(extract_pdf_text_from_bytes(pdf), "Hi\n\nabc");
}

TEST(PdfText, Errors) {
  EXPECT_EQ(pdf_kind(""), PdfError::Kind::not_pdf);
  EXPECT_EQ(pdf_kind("hello world"), PdfError::Kind::not_pdf);
  PdfBuilder b;
  int catalog = b.add("<< /Type /Catalog >>");
  int enc = b.add("<< /Filter /Standard /V 2 >>");
  EXPECT_EQ(pdf_kind(b.build(catalog, "/Encrypt " + std::to_string(enc) + " 0 R")), PdfError::Kind::encrypted);
  EXPECT_EQ(pdf_kind("%PDF-1.4\ngarbage without objects\n"), PdfError::Kind::malformed);
  try {
    extract_pdf_text("/nonexistent/file.pdf");
    FAIL();
  } catch (const PdfError& e) {
    EXPECT_EQ(e.kind(), PdfError::Kind::unreadable);
  }
}

namespace {

json payload(int overall, int soundness = 3) {
  return {{"Summary", "s"}, {"Strengths", {"a"}}, {"Weaknesses", {"b"}}, {"Questions", {"q"}},
          {"Soundness", soundness}, {"Presentation", 3}, {"Contribution", 2}, {"Overall", overall},
          {"Confidence", 4}, {"Decision", "Accept"}};
}

std::string reply(const json& p, const std::string& thought = "thinking") {
  return "THOUGHT:\n" + thought + "\n\nREVIEW JSON:\n```json\n" + p.dump() + "\n```\n";
}

ReviewerResources resources() { return load_reviewer_resources(fs::path(SCIENTIST_SOURCE_DATA) / "reviewer"); }

}  // namespace

TEST(ReviewSchema, StrictConversion) {
  auto r = review_from_payload(payload(7));
  EXPECT_EQ(r.overall, 7);
  EXPECT_EQ(r.preliminary_decision, Decision::accept);
  EXPECT_EQ(review_from_payload(to_payload(r)), r);
  EXPECT_EQ(review_from_record(to_record(r)), r);

  auto bad = [](json p) {
    EXPECT_THROW(review_from_payload(p), protocol::ProtocolError) << p.dump();
  };
  bad(payload(11));
  bad(payload(0));
  bad(payload(5, 5));
  auto p = payload(5);
  p.erase("Weaknesses");
  bad(p);
  p = payload(5);
  p["Strengths"] = json::array();
  bad(p);
  p = payload(5);
  p["Decision"] = "Weak Accept";
  bad(p);
  p = payload(5);
  p["Overall"] = "5";
  bad(p);
  p = payload(5);
  p.erase("Questions");
  EXPECT_NO_THROW(review_from_payload(p));
  EXPECT_EQ(decision_from_string("reject"), Decision::reject);
}

TEST(ReviewResources, ShippedFormAndExamples) {
  auto res = resources();
  EXPECT_NE(res.guidelines.find("REVIEW JSON"), std::string::npos);
  ASSERT_GE(res.fewshot.size(), 1u);
  auto shot = render_fewshot(res, 1);
  EXPECT_NE(shot.find("sample reviews"), std::string::npos);
  EXPECT_TRUE(render_fewshot(res, 0).empty());
}

TEST(ReviewOnce, OutOfRangeScoreGetsOneFixPromptThenFails) {
  std::vector<std::string> prompts;
  auto backend = std::make_shared<llm::CallbackBackend>([&](const llm::CompletionRequest& r) -> llm::Completion {
    prompts.push_back(r.turns.back().content);
    return {reply(payload(12)), 1, 1};
  });
  llm::Gateway g(backend);
  ReviewerConfig cfg;
  ReviewStats stats;
  EXPECT_THROW(review_once(g, "paper", cfg, resources(), 0, nullptr, &stats), ReviewFailed);
  EXPECT_EQ(prompts.size(), 2u);
  EXPECT_EQ(stats.calls, 2);
  EXPECT_NE(prompts[1].find("Overall"), std::string::npos);
}

TEST(ReviewOnce, DonePhraseAtReflectionThreeStopsEarly) {
  int calls = 0;
  auto backend = std::make_shared<llm::CallbackBackend>([&](const llm::CompletionRequest&) -> llm::Completion {
    ++calls;
    // Call 1 is the review; calls 2.. are reflections 1..
    return {reply(payload(5), calls == 4 ? "Fine. I am done" : "revise"), 1, 1};
  });
  llm::Gateway g(backend);
  ReviewerConfig cfg;
  ReviewStats stats;
  auto r = review_once(g, "paper", cfg, resources(), 0, nullptr, &stats);
  EXPECT_EQ(stats.reflection_calls, 3);
  EXPECT_EQ(stats.calls, 4);
  EXPECT_EQ(r.decision, Decision::reject);
  EXPECT_EQ(r.preliminary_decision, Decision::accept);
}

TEST(ReviewOnce, ReflectionsNeverExceedConfig) {
  for (int reflections : {0, 1, 5}) {
    int calls = 0;
    auto backend = std::make_shared<llm::CallbackBackend>([&](const llm::CompletionRequest&) -> llm::Completion {
      ++calls;
      return {reply(payload(6)), 1, 1};
    });
    llm::Gateway g(backend);
    ReviewerConfig cfg;
    cfg.reflections = reflections;
    ReviewStats stats;
    review_once(g, "paper", cfg, resources(), 0, nullptr, &stats);
    EXPECT_EQ(stats.reflection_calls, reflections);
    EXPECT_EQ(calls, reflections + 1);
  }
}

TEST(ReviewEnsemble, MetaReviewWithinSpan) {
  testkit::Script script;
  auto model = std::make_shared<testkit::FakeScientist>(script);
  llm::Gateway g(model);
  ReviewerConfig cfg;
  cfg.ensemble_size = 3;
  ReviewStats stats;
  auto r = review_ensemble(g, "paper", cfg, resources(), nullptr, &stats);
  // Members score 4, 5, 6 by sample index.
  EXPECT_EQ(r.overall, 5);
  EXPECT_EQ(stats.valid_members, 3);
  EXPECT_EQ(model->count("review"), 3);
  EXPECT_EQ(model->count("meta_review"), 1);
  EXPECT_EQ(r.decision, Decision::reject);
}

TEST(ReviewEnsemble, ConcurrentMatchesSequential) {
  testkit::Script script;
  auto model = std::make_shared<testkit::FakeScientist>(script);
  llm::Gateway g(model);
  ReviewerConfig cfg;
  cfg.ensemble_size = 4;
  auto seq = review_ensemble(g, "paper", cfg, resources());
  cfg.concurrent = true;
  EXPECT_EQ(review_ensemble(g, "paper", cfg, resources()), seq);
}

TEST(ReviewEnsemble, SpanViolationIsRejected) {
  auto backend = std::make_shared<llm::CallbackBackend>([&](const llm::CompletionRequest& r) -> llm::Completion {
    if (r.turns.front().content.find("Area Chair") != std::string::npos) return {reply(payload(9)), 1, 1};
    return {reply(payload(4 + r.sample_index), "I am done"), 1, 1};
  });
  llm::Gateway g(backend);
  ReviewerConfig cfg;
  cfg.ensemble_size = 3;
  EXPECT_THROW(review_ensemble(g, "paper", cfg, resources()), SpanViolation);
}

TEST(ReviewEnsemble, SingleMemberSkipsMetaReview) {
  testkit::Script script;
  auto model = std::make_shared<testkit::FakeScientist>(script);
  llm::Gateway g(model);
  ReviewerConfig cfg;
  cfg.ensemble_size = 1;
  review_ensemble(g, "paper", cfg, resources());
  EXPECT_EQ(model->count("meta_review"), 0);
}

TEST(ReviewEnsemble, QuorumFailure) {
  auto backend = std::make_shared<llm::CallbackBackend>([&](const llm::CompletionRequest& r) -> llm::Completion {
    return {r.sample_index == 1 ? std::string("garbage") : reply(payload(5)), 1, 1};
  });
  llm::Gateway g(backend);
  ReviewerConfig cfg;
  cfg.ensemble_size = 3;
  cfg.reflections = 0;
  EXPECT_THROW(review_ensemble(g, "paper", cfg, resources()), ReviewFailed);
  cfg.quorum = 2;
  EXPECT_EQ(review_ensemble(g, "paper", cfg, resources()).overall, 5);
}

TEST(Calibration, ThresholdRule) {
  Review r;
  for (int overall = 1; overall <= 10; ++overall) {
    r.overall = overall;
    EXPECT_EQ(calibrate_decision(r, 6), overall >= 6 ? Decision::accept : Decision::reject);
    EXPECT_EQ(calibrate_decision(r, 8), overall >= 8 ? Decision::accept : Decision::reject);
  }
  ReviewerConfig cfg;
  cfg.decision_threshold = 11;
  EXPECT_THROW(validate(cfg), ConfigError);
}
