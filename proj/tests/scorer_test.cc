// Copyright 2026 The ctxprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctxprobe/scorer.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ctxprobe/errors.h"
#include "ctxprobe/knowledge_base.h"
#include "ctxprobe/random.h"

namespace ctxprobe {
namespace {

Candidate C(const std::string& id, const std::string& surface) {
  return Candidate{EntityId(id), surface, {}};
}

ScoreRequest Request(std::string text, std::vector<Candidate> candidates) {
  ScoreRequest req;
  req.id = "r";
  req.input_text = std::move(text);
  req.candidates = std::move(candidates);
  req.mask_token = "[MASK]";
  req.subject = EntityId("D1");
  req.relation = RelationId("has_symptom");
  return req;
}

double ScoreOf(const std::vector<CandidateScore>& scores, const std::string& id) {
  for (const auto& s : scores) {
    if (s.entity.str() == id) return s.score;
  }
  ADD_FAILURE() << "no score for " << id;
  return 0;
}

KnowledgeBase GoldKb(const std::vector<std::string>& gold) {
  std::ostringstream text;
  text << R"({"kind": "entity", "id": "D1", "type": "disease", "names": ["d"]})"
       << "\n";
  for (const char* id : {"a", "b", "c", "d", "e"}) {
    text << R"({"kind": "entity", "id": ")" << id
         << R"(", "type": "symptom", "names": ["name )" << id << R"("]})"
         << "\n";
  }
  if (!gold.empty()) {
    text << R"({"kind": "gold", "subject": "D1", "relation": "has_symptom", "objects": [)";
    for (std::size_t i = 0; i < gold.size(); ++i) {
      text << (i ? ", " : "") << '"' << gold[i] << '"';
    }
    text << "]}\n";
  }
  std::istringstream in(text.str());
  return ParseKb(in, "kb");
}

TEST(ValidateRequest, Contract) {
  EXPECT_NO_THROW(ValidateRequest(Request("x [MASK].", {C("a", "a")})));
  EXPECT_THROW(ValidateRequest(Request("x.", {C("a", "a")})), ContractViolation);
  EXPECT_THROW(ValidateRequest(Request("[MASK] [MASK]", {C("a", "a")})),
               ContractViolation);
  EXPECT_THROW(ValidateRequest(Request("[MASK]", {})), ContractViolation);
  EXPECT_THROW(ValidateRequest(Request("[MASK]", {C("a", "x"), C("a", "y")})),
               ContractViolation);
  EXPECT_THROW(ValidateRequest(Request("[MASK]", {C("a", "x"), C("b", "x")})),
               ContractViolation);
}

TEST(UniformScorer, AllZero) {
  const auto scores =
      UniformScorer().Score(Request("[MASK]", {C("a", "a"), C("b", "b")}));
  ASSERT_EQ(scores.size(), 2u);
  for (const auto& s : scores) EXPECT_EQ(s.score, 0.0);
}

TEST(CandidatePrior, SmallFixedAndSeeded) {
  for (int i = 0; i < 100; ++i) {
    const EntityId id("e" + std::to_string(i));
    const double p = CandidatePrior(42, id);
    EXPECT_GE(p, 0.0);
    EXPECT_LT(p, 0.01);
    EXPECT_EQ(p, CandidatePrior(42, id));
  }
  EXPECT_NE(CandidatePrior(1, EntityId("a")), CandidatePrior(2, EntityId("a")));
}

TEST(OracleScorer, GoldOnTop) {
  const KnowledgeBase kb = GoldKb({"a"});
  const OracleScorer oracle(kb, 42);
  const auto scores =
      oracle.Score(Request("[MASK]", {C("a", "name a"), C("b", "name b")}));
  EXPECT_NEAR(ScoreOf(scores, "a"), 1.0, 0.01);
  EXPECT_NEAR(ScoreOf(scores, "b"), 0.0, 0.01);
  EXPECT_EQ(RanksFromScores(scores).at(EntityId("a")), 1);
}

TEST(OracleScorer, EmptyGoldIsPriorOnly) {
  const KnowledgeBase kb = GoldKb({});
  const OracleScorer oracle(kb, 7);
  const auto scores =
      oracle.Score(Request("[MASK]", {C("a", "name a"), C("b", "name b")}));
  EXPECT_EQ(ScoreOf(scores, "a"), CandidatePrior(7, EntityId("a")));
  EXPECT_EQ(ScoreOf(scores, "b"), CandidatePrior(7, EntityId("b")));
}

TEST(OracleScorer, MixedFivePartition) {
  const KnowledgeBase kb = GoldKb({"b", "d"});
  const OracleScorer oracle(kb, 3);
  const auto ranks = RanksFromScores(oracle.Score(Request(
      "some text [MASK]", {C("a", "name a"), C("b", "name b"), C("c", "name c"),
                           C("d", "name d"), C("e", "name e")})));
  for (const char* g : {"b", "d"}) {
    for (const char* o : {"a", "c", "e"}) {
      EXPECT_LT(ranks.at(EntityId(g)), ranks.at(EntityId(o)));
    }
  }
}

TEST(CopycatScorer, CountsThenRecency) {
  const CopycatScorer copycat(42);
  const auto scores = copycat.Score(
      Request("wheeze, then wheeze again, now cough. x has [MASK].",
              {C("w", "wheeze"), C("c", "cough"), C("f", "fever")}));
  EXPECT_GT(ScoreOf(scores, "w"), ScoreOf(scores, "c"));
  EXPECT_GT(ScoreOf(scores, "c"), ScoreOf(scores, "f"));
}

TEST(CopycatScorer, FormulaByHand) {
  const CopycatScorer copycat(42);
  const std::string text = "cough [MASK]";
  const auto scores = copycat.Score(Request(text, {C("c", "cough")}));
  // One occurrence, one byte between its end and the mask.
  const double expected = 1.0 - 0.25 * 1.0 / text.size() +
                          CandidatePrior(42, EntityId("c"));
  EXPECT_DOUBLE_EQ(ScoreOf(scores, "c"), expected);
}

TEST(CopycatScorer, EmptyContextUsesPrior) {
  const CopycatScorer copycat(9);
  const auto scores =
      copycat.Score(Request("[MASK]", {C("a", "alpha"), C("b", "beta")}));
  EXPECT_EQ(ScoreOf(scores, "a"), CandidatePrior(9, EntityId("a")));
  EXPECT_EQ(ScoreOf(scores, "b"), CandidatePrior(9, EntityId("b")));
}

TEST(CopycatScorer, AliasesCount) {
  const CopycatScorer copycat(1);
  auto req = Request("dyspnea. [MASK]",
                     {Candidate{EntityId("s"), "shortness of breath", {"dyspnea"}},
                      C("w", "wheeze")});
  const auto ranks = RanksFromScores(copycat.Score(req));
  EXPECT_EQ(ranks.at(EntityId("s")), 1);
}

TEST(CopycatScorer, CountOrderWithThreeCandidates) {
  const CopycatScorer copycat(5);
  for (int trial = 0; trial < 50; ++trial) {
    SeededRng rng(trial);
    // Place 2 of x, 1 of y and no z in random order.
    std::vector<std::string> words = {"xray", "xray", "yak", "filler", "more"};
    for (std::size_t i = words.size(); i > 1; --i) {
      std::swap(words[i - 1], words[rng.Uniform(i)]);
    }
    std::string text;
    for (const auto& w : words) text += w + " ";
    text += "[MASK]";
    const auto ranks = RanksFromScores(copycat.Score(
        Request(text, {C("x", "xray"), C("y", "yak"), C("z", "zebra")})));
    EXPECT_EQ(ranks.at(EntityId("x")), 1);
    EXPECT_EQ(ranks.at(EntityId("y")), 2);
    EXPECT_EQ(ranks.at(EntityId("z")), 3);
  }
}

TEST(CopycatScorer, ExtraOccurrenceNeverLowersRank) {
  const CopycatScorer copycat(77);
  const std::vector<std::string> names = {"alpha", "beta", "gamma", "delta"};
  std::vector<Candidate> cands;
  for (const auto& n : names) cands.push_back(C(n, n));
  SeededRng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> words;
    const std::size_t len = rng.Uniform(8);
    for (std::size_t i = 0; i < len; ++i) {
      words.push_back(rng.Uniform(3) == 0 ? "and" : names[rng.Uniform(4)]);
    }
    auto render = [](const std::vector<std::string>& w) {
      std::string t;
      for (const auto& s : w) t += s + " ";
      return t + "[MASK].";
    };
    const auto before = RanksFromScores(copycat.Score(Request(render(words), cands)));
    const std::string& target = names[rng.Uniform(4)];
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(
                                     rng.Uniform(words.size() + 1)),
                 target);
    const auto after = RanksFromScores(copycat.Score(Request(render(words), cands)));
    EXPECT_LE(after.at(EntityId(target)), before.at(EntityId(target)))
        << render(words);
  }
}

TEST(CopycatScorer, Deterministic) {
  const CopycatScorer a(3), b(3);
  const auto req = Request("beta alpha [MASK]", {C("a", "alpha"), C("b", "beta")});
  const auto x = a.Score(req);
  const auto y = b.Score(req);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i].score, y[i].score);
}

TEST(RanksFromScores, OrderAndTies) {
  std::vector<CandidateScore> s = {{EntityId("a"), 2.0}, {EntityId("b"), 1.0}};
  auto r = RanksFromScores(s);
  EXPECT_EQ(r.at(EntityId("a")), 1);
  EXPECT_EQ(r.at(EntityId("b")), 2);
  s = {{EntityId("b"), 1.0}, {EntityId("a"), 1.0}};
  r = RanksFromScores(s);
  EXPECT_EQ(r.at(EntityId("a")), 1);
  EXPECT_EQ(r.at(EntityId("b")), 2);
}

TEST(RanksFromScores, RejectsBadInput) {
  std::vector<CandidateScore> nan = {{EntityId("a"), std::nan("")}};
  EXPECT_THROW(RanksFromScores(nan), ContractViolation);
  std::vector<CandidateScore> dup = {{EntityId("a"), 1}, {EntityId("a"), 2}};
  EXPECT_THROW(RanksFromScores(dup), ContractViolation);
}

TEST(RanksFromScores, MatchesSortOracle) {
  SeededRng rng(100);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<CandidateScore> scores;
    for (int i = 0; i < 100; ++i) {
      // Coarse values force plenty of ties.
      scores.push_back({EntityId("e" + std::to_string(rng.Uniform(1000))),
                        static_cast<double>(rng.Uniform(20))});
    }
    std::sort(scores.begin(), scores.end(),
              [](const auto& a, const auto& b) { return a.entity < b.entity; });
    scores.erase(std::unique(scores.begin(), scores.end(),
                             [](const auto& a, const auto& b) {
                               return a.entity == b.entity;
                             }),
                 scores.end());
    const auto ranks = RanksFromScores(scores);
    // Oracle: count the candidates that must precede each one.
    for (const auto& s : scores) {
      int ahead = 0;
      for (const auto& o : scores) {
        if (o.score > s.score || (o.score == s.score && o.entity < s.entity)) {
          ++ahead;
        }
      }
      EXPECT_EQ(ranks.at(s.entity), ahead + 1);
    }
  }
}

TEST(MakeMockScorer, KnownNames) {
  const KnowledgeBase kb = GoldKb({"a"});
  EXPECT_EQ(MakeMockScorer("uniform", kb, 1)->Name(), "uniform");
  EXPECT_EQ(MakeMockScorer("copycat", kb, 1)->Name(), "copycat");
  EXPECT_EQ(MakeMockScorer("oracle", kb, 1)->Name(), "oracle");
  EXPECT_EQ(MakeMockScorer("bert", kb, 1), nullptr);
}

}  // namespace
}  // namespace ctxprobe
