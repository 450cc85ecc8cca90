#include <gtest/gtest.h>

#include "fake_scientist.hpp"
#include "scientist/prompts.hpp"
#include "scientist/review/pdf_text.hpp"
#include "scientist/util/fs.hpp"
#include "scientist/writeup/manuscript.hpp"
#include "scientist/writeup/writer.hpp"

using namespace scientist;
using namespace scientist::writeup;
namespace fs = std::filesystem;

TEST(Manuscript, Orders) {
  EXPECT_EQ(render_order().size(), 8u);
  EXPECT_EQ(render_order().front(), "Abstract");
  EXPECT_EQ(writing_order().size(), 7u);
  EXPECT_EQ(std::count(writing_order().begin(), writing_order().end(), "Related Work"), 0);
}

TEST(Manuscript, ParseAndSplice) {
  std::string tex = "pre\n%% BEGIN SECTION: Introduction\nold\n%% END SECTION: Introduction\nmid\n"
                    "%% BEGIN SECTION: Results\n%% END SECTION: Results\npost\n";
  auto s = parse_sections(tex);
  EXPECT_EQ(s.at("Introduction"), "old\n");
  EXPECT_EQ(s.at("Results"), "");
  ManuscriptState st;
  st.set_section("Introduction", "new text");
  st.set_section("Results", "r\n");
  auto out = splice_sections(tex, st);
  EXPECT_EQ(out, "pre\n%% BEGIN SECTION: Introduction\nnew text\n%% END SECTION: Introduction\nmid\n"
                 "%% BEGIN SECTION: Results\nr\n%% END SECTION: Results\npost\n");
  EXPECT_EQ(parse_sections(out).at("Introduction"), "new text\n");
}

TEST(Manuscript, RejectsBrokenMarkers) {
  EXPECT_THROW(parse_sections("%% BEGIN SECTION: A\n"), TemplateFormatError);
  EXPECT_THROW(parse_sections("%% END SECTION: A\n"), TemplateFormatError);
  EXPECT_THROW(parse_sections("%% BEGIN SECTION: A\n%% BEGIN SECTION: B\n%% END SECTION: B\n%% END SECTION: A\n"),
               TemplateFormatError);
  EXPECT_THROW(parse_sections("%% BEGIN SECTION: A\n%% END SECTION: A\n%% BEGIN SECTION: A\n%% END SECTION: A\n"),
               TemplateFormatError);
  EXPECT_THROW(parse_sections("%% BEGIN SECTION: A\n%% END SECTION: B\n"), TemplateFormatError);
}

TEST(Manuscript, Citations) {
  std::string tex = "As shown~\\cite{a,b} and \\citep[p.~3]{c} or \\citet*{d}. Also \\nocite{e}.";
  EXPECT_EQ(cited_keys(tex), (std::vector<std::string>{"a", "b", "c", "d", "e"}));
  EXPECT_EQ(strip_citations(tex), "As shown and  or . Also .");
  EXPECT_EQ(filter_citations(tex, {"b", "d"}), "As shown~\\cite{b} and  or \\citet*{d}. Also .");
}

TEST(Manuscript, Bibliography) {
  auto entries = parse_bibliography(
      "@comment{skip}\n@string{x = \"y\"}\n@article{ho2020,\n title={A {Nested} Title},\n}\n\n@misc{other, note={}}\n");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].key, "ho2020");
  EXPECT_NE(entries[0].bibtex.find("{Nested}"), std::string::npos);
  ManuscriptState st;
  EXPECT_TRUE(st.add_bib(entries[0]));
  EXPECT_FALSE(st.add_bib(entries[0]));
  EXPECT_TRUE(st.has_key("ho2020"));
}

TEST(Manuscript, FigureGuard) {
  auto dir = testkit::make_temp_dir("figs");
  fsx::write_file_atomic(dir / "real.png", "x");
  std::string tex = "\\includegraphics[width=2cm]{real.png}\n\\includegraphics{ghost.png}\n\\includegraphics{real}\n";
  EXPECT_EQ(referenced_figures(tex), (std::vector<std::string>{"real.png", "ghost.png", "real"}));
  EXPECT_EQ(drop_missing_figures(tex, dir), "\\includegraphics[width=2cm]{real.png}\n\n\\includegraphics{real}\n");
}

TEST(Manuscript, JsonRoundTrip) {
  ManuscriptState st;
  st.set_section("Method", "m");
  st.add_bib({"k", "@misc{k}"});
  st.figures.push_back({"a.png", "cap"});
  st.compiled = true;
  auto back = manuscript_from_json(to_json(st));
  EXPECT_EQ(back.section("Method"), "m");
  EXPECT_TRUE(back.has_key("k"));
  EXPECT_EQ(back.figures.size(), 1u);
  EXPECT_TRUE(back.compiled);
}

TEST(SectionTips, ShippedTipsCoverEveryWrittenSection) {
  auto tips = load_section_tips(fs::path(SCIENTIST_SOURCE_DATA) / "writeup" / "section_tips.json");
  for (const auto& s : writing_order()) EXPECT_FALSE(tips.for_section(s).empty()) << s;
  EXPECT_THROW(parse_section_tips(R"({"Abstract": "x"})"), ConfigError);
}

TEST(CompileLog, ErrorExcerpt) {
  std::string log = "line a\nline b\n! Undefined control sequence.\nl.12 \\foo\nmore\n";
  EXPECT_EQ(error_excerpt(log, 2), "! Undefined control sequence.\nl.12 \\foo");
  EXPECT_EQ(error_excerpt("all\nfine\n", 5), "all\nfine");
}

namespace {

struct Desk {
  fs::path ws;
  std::shared_ptr<testkit::FakeScientist> model;
  std::unique_ptr<llm::Gateway> gateway;
  std::unique_ptr<edit::EditSession> session;
  std::unique_ptr<WriteupContext> ctx;
  lab::LabJournal journal;
  SectionTips tips;

  explicit Desk(testkit::Script script) {
    ws = testkit::make_temp_dir("desk") / "ws";
    fsx::copy_tree(testkit::stub_template_dir(), ws);
    std::string png = "\x89PNG\r\n\x1a\n";
    fsx::write_file_atomic(ws / "loss_curve.png", png);
    model = std::make_shared<testkit::FakeScientist>(script);
    gateway = std::make_unique<llm::Gateway>(model);
    llm::ModelSettings m{"fake", 0.7, 1000};
    session = std::make_unique<edit::EditSession>(*gateway, m, edit::Workspace(ws),
                                                  std::vector<std::string>{"latex/template.tex"}, nullptr,
                                                  edit::EditSessionOptions{}, std::string(prompts::kWriteupSystem));
    ctx = std::make_unique<WriteupContext>(WriteupContext{*session, *gateway, m, nullptr, "latex/template.tex",
                                                          "latex/references.bib", {}, 2});
    journal.entries = {{1, "Results: {\"eval_loss\": 0.4213}"}};
    journal.figures = {"loss_curve.png"};
    journal.plot_descriptions = {{"loss_curve.png", "loss_curve.png shows the loss."}};
    tips = load_section_tips(fs::path(SCIENTIST_SOURCE_DATA) / "writeup" / "section_tips.json");
  }

  ManuscriptState draft() {
    auto st = begin_manuscript(*ctx, journal);
    for (const auto& s : writing_order()) write_section(st, s, journal, tips, *ctx);
    return st;
  }
};

CompileSettings fake_toolchain(int repair_rounds = 5) {
  CompileSettings c;
  auto tex = "python3 " + testkit::fake_tex_script().string();
  c.lint_command = "";
  c.compile_commands = {tex + " pdflatex template.tex", tex + " bibtex template", tex + " pdflatex template.tex"};
  c.repair_rounds = repair_rounds;
  c.timeout = std::chrono::seconds(60);
  return c;
}

}  // namespace

TEST(Writer, WritesEverySectionInOrderAndStripsCitations) {
  testkit::Script script;
  script.inject_compile_error = false;
  Desk d(script);
  auto st = begin_manuscript(*d.ctx, d.journal);
  EXPECT_THROW(write_section(st, "Method", d.journal, d.tips, *d.ctx), WriteupPrecondition);
  EXPECT_THROW(write_section(st, "Related Work", d.journal, d.tips, *d.ctx), WriteupPrecondition);
  for (const auto& s : writing_order()) write_section(st, s, d.journal, d.tips, *d.ctx);
  for (const auto& s : writing_order()) EXPECT_FALSE(st.section(s).empty()) << s;
  EXPECT_EQ(st.section("Related Work"), "");
  EXPECT_EQ(st.section("Results").find("\\cite"), std::string::npos);
  EXPECT_EQ(d.model->count("section_write"), 7);
  EXPECT_EQ(d.model->count("section_reflect"), 7);
  auto tex = fsx::read_file(d.ws / "latex" / "template.tex");
  EXPECT_NE(tex.find("This introduction describes"), std::string::npos);
  lab::LabJournal empty;
  EXPECT_THROW(write_section(st, "Abstract", empty, d.tips, *d.ctx), WriteupPrecondition);
}

TEST(Writer, GathersCitationsIntoRelatedWork) {
  testkit::Script script;
  script.inject_compile_error = false;
  Desk d(script);
  auto st = d.draft();
  literature::FixtureLiteratureClient lit(testkit::literature_fixture_dir());
  auto report = gather_citations(st, *d.ctx, lit, 5);
  ASSERT_EQ(report.added_keys.size(), 1u);
  EXPECT_EQ(report.searches, 1);
  EXPECT_EQ(report.rounds, 2);
  EXPECT_FALSE(st.empty_related_work);
  EXPECT_NE(st.section("Related Work").find("\\cite{" + report.added_keys[0] + "}"), std::string::npos);
  auto bib = fsx::read_file(d.ws / "latex" / "references.bib");
  EXPECT_NE(bib.find(report.added_keys[0]), std::string::npos);
}

TEST(Writer, CitationRoundsAreBoundedAndSearchFailuresCostARound) {
  testkit::Script script;
  script.citation_queries = 100;
  Desk d(script);
  auto st = d.draft();
  literature::FixtureLiteratureClient empty(testkit::make_temp_dir("no-fixtures"));
  auto report = gather_citations(st, *d.ctx, empty, 4);
  EXPECT_EQ(report.rounds, 4);
  EXPECT_EQ(report.search_failures, 4);
  EXPECT_EQ(d.model->count("citation_query"), 4);
  EXPECT_TRUE(st.empty_related_work);
}

TEST(Compile, SucceedsOnRoundZero) {
  testkit::Script script;
  script.inject_compile_error = false;
  Desk d(script);
  auto st = d.draft();
  auto r = compile_manuscript(st, *d.ctx, fake_toolchain());
  EXPECT_TRUE(r.success) << r.excerpt;
  EXPECT_EQ(r.repair_rounds, 0);
  EXPECT_TRUE(st.compiled);
  EXPECT_TRUE(fs::exists(d.ws / "paper.pdf"));
  EXPECT_TRUE(fs::exists(d.ws / "latex" / "loss_curve.png"));
  auto text = review::extract_pdf_text(d.ws / "paper.pdf");
  EXPECT_NE(text.find("This method describes the stub echo study"), std::string::npos);
}

TEST(Compile, OneRepairRound) {
  testkit::Script script;
  Desk d(script);
  auto st = d.draft();
  auto r = compile_manuscript(st, *d.ctx, fake_toolchain());
  EXPECT_TRUE(r.success) << r.excerpt;
  EXPECT_EQ(r.repair_rounds, 1);
  EXPECT_EQ(d.model->count("compile_repair"), 1);
  EXPECT_EQ(st.section("Method").find("brokenmacro"), std::string::npos);
}

TEST(Compile, StopsAfterExactlyFiveRepairs) {
  testkit::Script script;
  script.repair_compile_error = false;
  Desk d(script);
  auto st = d.draft();
  auto r = compile_manuscript(st, *d.ctx, fake_toolchain(5));
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.repair_rounds, 5);
  EXPECT_EQ(d.model->count("compile_repair"), 5);
  EXPECT_NE(r.excerpt.find("Undefined control sequence"), std::string::npos);
  EXPECT_FALSE(st.compiled);
  EXPECT_TRUE(fs::exists(d.ws / "latex" / "compile.log"));
}

TEST(Compile, MissingToolchainIsReportedWithoutRepairs) {
  testkit::Script script;
  Desk d(script);
  auto st = d.draft();
  auto settings = fake_toolchain();
  settings.compile_commands = {"no-such-pdflatex-xyz template.tex"};
  auto r = compile_manuscript(st, *d.ctx, settings);
  EXPECT_FALSE(r.success);
  EXPECT_TRUE(r.toolchain_missing);
  EXPECT_EQ(d.model->count("compile_repair"), 0);
}

TEST(Compile, GuardDropsUnknownCitationsAndMissingFigures) {
  testkit::Script script;
  script.inject_compile_error = false;
  Desk d(script);
  auto st = d.draft();
  st.set_section("Results", "See \\cite{nobody}.\n\\includegraphics{ghost.png}\n");
  auto r = compile_manuscript(st, *d.ctx, fake_toolchain());
  EXPECT_TRUE(r.success);
  EXPECT_EQ(st.section("Results").find("nobody"), std::string::npos);
  EXPECT_EQ(st.section("Results").find("ghost.png"), std::string::npos);
}

TEST(Refine, KeepsSectionsOnNoOp) {
  testkit::Script script;
  script.inject_compile_error = false;
  Desk d(script);
  auto st = d.draft();
  auto before = st.sections;
  auto r = refine_manuscript(st, *d.ctx);
  EXPECT_EQ(r.refined.size(), 7u);
  EXPECT_TRUE(r.failed.empty());
  EXPECT_EQ(st.sections, before);
}
