#include <gtest/gtest.h>

#include <fstream>

#include "fake_scientist.hpp"
#include "scientist/llm/backend.hpp"
#include "scientist/llm/gateway.hpp"
#include "scientist/protocol/envelope.hpp"
#include "scientist/protocol/reflection.hpp"
#include "scientist/util/hash.hpp"
#include "scientist/util/text.hpp"

using namespace scientist;
using namespace scientist::llm;
using namespace scientist::protocol;

namespace {

CompletionRequest request(std::string user, int sample = 0) {
  CompletionRequest r;
  r.model_id = "m";
  r.temperature = 0.5;
  r.turns = {{Role::system, "sys"}, {Role::user, std::move(user)}};
  r.sample_index = sample;
  return r;
}

RetryPolicy no_sleep(int attempts, std::vector<long>* slept = nullptr) {
  RetryPolicy p;
  p.max_attempts = attempts;
  p.initial_backoff = std::chrono::milliseconds(100);
  p.sleep = [slept](std::chrono::milliseconds d) {
    if (slept) slept->push_back(d.count());
  };
  return p;
}

}  // namespace

TEST(Util, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Util, FillLeavesUnknownBraces) {
  EXPECT_EQ(text::fill("a {x} {\"k\": 1} {y}", {{"x", "1"}}), "a 1 {\"k\": 1} {y}");
  EXPECT_EQ(text::count_occurrences("aaaa", "aa"), 3u);
}

TEST(Chat, DigestCoversSampleIndexAndTurns) {
  auto a = request("hello");
  EXPECT_EQ(request_digest(a), request_digest(request("hello")));
  EXPECT_NE(request_digest(a), request_digest(request("hello", 1)));
  EXPECT_NE(request_digest(a), request_digest(request("hello!")));
  auto b = a;
  b.temperature = 0.6;
  EXPECT_NE(request_digest(a), request_digest(b));
  b = a;
  b.max_output_tokens = 17;
  EXPECT_EQ(request_digest(a), request_digest(b));
}

TEST(Chat, ValidateRejectsBadShapes) {
  CompletionRequest r;
  EXPECT_THROW(validate(r), RequestError);
  r = request("x");
  r.turns.push_back({Role::assistant, "reply"});
  EXPECT_THROW(validate(r), RequestError);
  r = request("x");
  r.turns.push_back({Role::system, "late"});
  r.turns.push_back({Role::user, "again"});
  EXPECT_THROW(validate(r), RequestError);
  r = request("x");
  r.turns.back().content.clear();
  EXPECT_THROW(validate(r), RequestError);
  r = request("x");
  r.temperature = -1;
  EXPECT_THROW(validate(r), RequestError);
  EXPECT_NO_THROW(validate(request("x")));
}

TEST(Gateway, RetriesTransportErrorsWithBackoff) {
  int calls = 0;
  auto backend = std::make_shared<CallbackBackend>([&](const CompletionRequest&) -> Completion {
    if (++calls < 3) throw TransportError("reset");
    return {"ok", 10, 5};
  });
  std::vector<long> slept;
  PriceTable prices;
  prices.set("m", {1.0, 2.0});
  Gateway g(backend, prices, no_sleep(5, &slept));
  auto res = g.chat_complete(request("q"));
  EXPECT_EQ(res.text, "ok");
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(slept, (std::vector<long>{100, 200}));
  auto u = g.ledger().snapshot();
  EXPECT_EQ(u.calls, 1u);
  EXPECT_EQ(u.prompt_tokens, 10u);
  EXPECT_DOUBLE_EQ(u.cost, (10 * 1.0 + 5 * 2.0) / 1e6);
}

TEST(Gateway, EmptyCompletionIsRetriedThenExhausted) {
  int calls = 0;
  auto backend = std::make_shared<CallbackBackend>([&](const CompletionRequest&) -> Completion {
    ++calls;
    return {"", 1, 0};
  });
  Gateway g(backend, {}, no_sleep(3));
  try {
    g.chat_complete(request("q"));
    FAIL();
  } catch (const RetriesExhausted& e) {
    EXPECT_EQ(e.attempts(), 3);
  }
  EXPECT_EQ(calls, 3);
}

TEST(Gateway, RateLimitHonorsRetryAfter) {
  int calls = 0;
  auto backend = std::make_shared<CallbackBackend>([&](const CompletionRequest&) -> Completion {
    if (++calls == 1) throw RateLimitError("429", 2.5);
    return {"ok", 1, 1};
  });
  std::vector<long> slept;
  Gateway g(backend, {}, no_sleep(2, &slept));
  g.chat_complete(request("q"));
  EXPECT_EQ(slept, (std::vector<long>{2500}));
}

TEST(Gateway, ReplayMissIsNotRetried) {
  auto replay = std::make_shared<ReplayBackend>();
  Gateway g(replay, {}, no_sleep(5));
  EXPECT_THROW(g.chat_complete(request("q")), ReplayMiss);
}

TEST(Gateway, TranscriptReplaysInOrder) {
  auto dir = testkit::make_temp_dir("transcript");
  int n = 0;
  auto live = std::make_shared<CallbackBackend>([&](const CompletionRequest&) -> Completion {
    return {"answer " + std::to_string(++n), 3, 4};
  });
  {
    TranscriptWriter tw(dir / "t.jsonl");
    Gateway g(live, {}, no_sleep(1));
    g.chat_complete(request("same"), &tw);
    g.chat_complete(request("same"), &tw);
    g.chat_complete(request("other", 2), &tw);
    EXPECT_EQ(tw.entries(), 3u);
  }
  auto replay = std::make_shared<ReplayBackend>();
  replay->load(dir);
  EXPECT_EQ(replay->size(), 3u);
  Gateway g(replay, {}, no_sleep(1));
  EXPECT_EQ(g.chat_complete(request("same")).text, "answer 1");
  EXPECT_EQ(g.chat_complete(request("same")).text, "answer 2");
  EXPECT_EQ(g.chat_complete(request("other", 2)).text, "answer 3");
  // Past the recorded answers an identical request repeats the last one.
  EXPECT_EQ(g.chat_complete(request("same")).text, "answer 2");
  EXPECT_THROW(g.chat_complete(request("unseen")), ReplayMiss);
  EXPECT_EQ(g.ledger().snapshot().prompt_tokens, 12u);
}

TEST(Gateway, ConversationKeepsHistoryOnFailure) {
  int calls = 0;
  auto backend = std::make_shared<CallbackBackend>([&](const CompletionRequest& r) -> Completion {
    if (++calls == 2) throw RequestError("bad");
    return {"reply to " + r.turns.back().content, 1, 1};
  });
  Gateway g(backend, {}, no_sleep(1));
  Conversation c(g, {"m", 0.1, 100}, "sys");
  EXPECT_EQ(c.ask("a"), "reply to a");
  EXPECT_THROW(c.ask("b"), RequestError);
  EXPECT_EQ(c.turns().size(), 3u);
  EXPECT_EQ(c.ask("c"), "reply to c");
  EXPECT_EQ(c.turns().size(), 5u);
}

TEST(HttpBackend, WireFormat) {
  auto r = request("hi", 3);
  r.max_output_tokens = 77;
  auto body = HttpChatBackend::build_body(r);
  EXPECT_EQ(body["model"], "m");
  EXPECT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(body["messages"][1]["role"], "user");
  EXPECT_FALSE(body.contains("sample_index"));
  auto c = HttpChatBackend::parse_body(
      R"({"choices":[{"message":{"role":"assistant","content":"yo"}}],"usage":{"prompt_tokens":5,"completion_tokens":2}})");
  EXPECT_EQ(c.text, "yo");
  EXPECT_EQ(c.prompt_tokens, 5u);
  EXPECT_THROW(HttpChatBackend::parse_body("not json"), Error);
}

TEST(Envelope, LastFenceWins) {
  auto env = parse_envelope("THOUGHT:\nfirst\n```json\n{\"a\": 1}\n```\nmore\n\nNEW IDEA JSON:\n```json\n{\"a\": 2}\n```\n");
  EXPECT_EQ(env.payload["a"], 2);
  EXPECT_NE(env.thought.find("first"), std::string::npos);
  EXPECT_EQ(env.thought.find("NEW IDEA JSON"), std::string::npos);
}

TEST(Envelope, Failures) {
  auto kind = [](const std::string& text) {
    try {
      parse_envelope(text);
    } catch (const ProtocolError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  EXPECT_EQ(kind("THOUGHT: nothing"), static_cast<int>(ProtocolError::Kind::no_fence));
  EXPECT_EQ(kind("```json\n{\"a\": 1}\n"), static_cast<int>(ProtocolError::Kind::unterminated_fence));
  EXPECT_EQ(kind("```json\n{\"a\": }\n```"), static_cast<int>(ProtocolError::Kind::malformed_payload));
  EXPECT_EQ(kind("```json\n[1, 2]\n```"), static_cast<int>(ProtocolError::Kind::malformed_payload));
}

TEST(Envelope, MissingMarkerKeepsPrefixAsThought) {
  auto env = parse_envelope("I think so.\n```json\n{}\n```");
  EXPECT_EQ(text::trim(env.thought), "I think so.");
  EXPECT_TRUE(env.payload.empty());
}

namespace {

std::string reply(const std::string& thought, int v) {
  return "THOUGHT:\n" + thought + "\n```json\n{\"v\": " + std::to_string(v) + "}\n```";
}

}  // namespace

TEST(Reflection, StopsOnDonePhrase) {
  int asked = 0;
  AskFn ask = [&](const std::string&) {
    ++asked;
    return reply(asked == 2 ? "ok I am done" : "better", asked + 1);
  };
  auto res = run_reflection_loop(reply("seed", 1), {5, "I am done"}, [](int r) { return "round " + std::to_string(r); }, ask);
  EXPECT_EQ(res.calls, 2);
  EXPECT_EQ(res.rounds_used, 3);
  EXPECT_EQ(res.envelope.payload["v"], 3);
}

TEST(Reflection, DonePhraseInSeedIsIgnored) {
  int asked = 0;
  AskFn ask = [&](const std::string&) { return reply("I am done", ++asked + 1); };
  auto res = run_reflection_loop(reply("I am done", 1), {3, "I am done"}, [](int) { return "again"; }, ask);
  EXPECT_EQ(res.calls, 1);
}

TEST(Reflection, NeverExceedsRounds) {
  for (int rounds = 1; rounds <= 6; ++rounds) {
    int asked = 0;
    std::vector<int> seen;
    AskFn ask = [&](const std::string&) { return reply("still going", ++asked); };
    auto res = run_reflection_loop(reply("seed", 0), {rounds, "I am done"},
                                   [&](int r) {
                                     seen.push_back(r);
                                     return std::string("r");
                                   },
                                   ask);
    EXPECT_EQ(res.calls, rounds - 1);
    EXPECT_LE(res.rounds_used, rounds);
    if (!seen.empty()) {
      EXPECT_EQ(seen.front(), 2);
    }
  }
}

TEST(Reflection, TwoMalformedRepliesStop) {
  int asked = 0;
  std::vector<std::string> prompts;
  AskFn ask = [&](const std::string& m) {
    prompts.push_back(m);
    ++asked;
    return std::string("no json here");
  };
  auto res = run_reflection_loop(reply("seed", 7), {10, "I am done"}, [](int) { return "reflect"; }, ask);
  EXPECT_EQ(res.calls, 2);
  EXPECT_EQ(res.envelope.payload["v"], 7);
  EXPECT_EQ(prompts[0], "reflect");
  EXPECT_NE(prompts[1], "reflect");
}

TEST(Reflection, ValidatorFailureCountsAsMalformed) {
  Validator positive = [](const Envelope& e) {
    if (e.payload.value("v", 0) <= 0) throw ProtocolError(ProtocolError::Kind::schema, "v must be positive");
  };
  int calls = 0;
  AskFn ask = [&](const std::string&) { return reply("x", 5); };
  auto env = parse_with_retry(reply("seed", 0), ask, positive, &calls);
  EXPECT_EQ(env.payload["v"], 5);
  EXPECT_EQ(calls, 1);
  AskFn bad = [&](const std::string&) { return reply("x", -1); };
  EXPECT_THROW(parse_with_retry(reply("seed", 0), bad, positive), ProtocolError);
}
