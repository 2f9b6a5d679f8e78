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

#include "ctxprobe/pipeline.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "ctxprobe/errors.h"
#include "ctxprobe/records.h"
#include "ctxprobe/remote_scorer.h"
#include "ctxprobe/report.h"
#include "httplib.h"
#include "synthetic.h"

namespace ctxprobe {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const fs::path kToyDir = fs::path(CTXPROBE_SOURCE_DIR) / "data" / "toy";

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig ToyConfig(const std::string& backend, const fs::path& out,
                    json extra = json::object()) {
  json overrides = {{"backend", backend}, {"out", out.string()}};
  overrides.update(extra);
  return ValidateConfig(kToyDir / "config.json", overrides);
}

TEST(Run, OracleOnToyFixture) {
  const auto out = testing::ScratchDir("toy-oracle");
  const RunSummary s = ctxprobe::Run(ToyConfig("oracle", out, {{"variants", {"real"}}}));
  EXPECT_EQ(s.status, "ok");
  EXPECT_EQ(s.triples_in, 1u);
  EXPECT_EQ(s.triples_scored, 1u);
  const json& real = s.aggregate["ucm_m"]["by_variant"]["real"];
  EXPECT_GT(real["n"].get<int>(), 0);
  // Oracle scores ignore the input text, so ranks never move: every
  // correct-object step is a Confuse.
  EXPECT_EQ(real["confuse"], 1.0);
  EXPECT_EQ(real["understand"], 0.0);
  EXPECT_EQ(real["misunderstand"], 0.0);
  EXPECT_EQ(s.aggregate["topk"]["has_symptom"]["with_context"]["1"], 1.0);
  EXPECT_TRUE(s.aggregate["ucm_m"]["negative"].is_null());
}

TEST(Run, NoMatchingDocumentsIsEmptyNotFailure) {
  const auto dir = testing::ScratchDir("empty-run");
  std::ofstream(dir / "kb.jsonl") << Slurp(kToyDir / "kb.jsonl");
  std::ofstream(dir / "templates.jsonl") << Slurp(kToyDir / "templates.jsonl");
  std::ofstream(dir / "corpus.jsonl")
      << R"({"doc_id": "x", "source": "ehr", "text": "Nothing relevant here."})"
      << "\n";
  std::ofstream(dir / "config.json")
      << json{{"kb", "kb.jsonl"},
              {"corpus", "corpus.jsonl"},
              {"templates", "templates.jsonl"}}
             .dump();
  const RunSummary s = ctxprobe::Run(ValidateConfig(dir / "config.json"));
  EXPECT_EQ(s.status, "empty");
  EXPECT_EQ(s.rc_records, 0u);
  EXPECT_EQ(s.series_scored, 0u);
  EXPECT_EQ(s.triples_skipped, 1u);
  EXPECT_EQ(s.triple_skips.at("no-context"), 1u);
  EXPECT_TRUE(fs::exists(s.run_dir / kAggregateFile));
  EXPECT_TRUE(fs::exists(s.run_dir / kReportFile));
}

TEST(Run, CopycatAggregateIsByteIdentical) {
  const auto a = ctxprobe::Run(ToyConfig("copycat", testing::ScratchDir("det-a")));
  const auto b = ctxprobe::Run(ToyConfig("copycat", testing::ScratchDir("det-b"),
                               {{"concurrency", 4}}));
  EXPECT_EQ(a.run_id, b.run_id);
  EXPECT_EQ(Slurp(a.run_dir / kAggregateFile), Slurp(b.run_dir / kAggregateFile));
  EXPECT_EQ(Slurp(a.run_dir / kReportFile), Slurp(b.run_dir / kReportFile));
}

TEST(Run, SeedChangesRunId) {
  const auto out = testing::ScratchDir("seeds");
  const auto a = ctxprobe::Run(ToyConfig("copycat", out, {{"seed", 1}}));
  const auto b = ctxprobe::Run(ToyConfig("copycat", out, {{"seed", 2}}));
  EXPECT_NE(a.run_id, b.run_id);
}

TEST(Run, RecordsCarryRunIdentity) {
  const auto s = ctxprobe::Run(ToyConfig("copycat", testing::ScratchDir("records")));
  const auto records = ReadRecords(s.run_dir / kRecordsFile);
  std::map<std::string, int> kinds;
  for (const auto& r : records) {
    EXPECT_EQ(r["run_id"], s.run_id);
    EXPECT_EQ(r["config_hash"], s.config_hash);
    ++kinds[r["kind"].get<std::string>()];
  }
  EXPECT_EQ(kinds["segmentation"], 4);  // 2 docs x {target, negative}
  EXPECT_EQ(kinds["rc_record"], static_cast<int>(s.rc_records));
  EXPECT_EQ(kinds["aggregate"], 1);
  EXPECT_GT(kinds["probe_input"], 0);
  EXPECT_EQ(kinds["probe_input"], kinds["rank_row"]);
  const json echo = json::parse(Slurp(s.run_dir / kConfigEchoFile));
  EXPECT_EQ(echo["backend"], "copycat");
}

TEST(Run, AccountingOnSyntheticData) {
  auto data = testing::MakeSynthetic();
  // A relation without a template and a triple without any document.
  data.kb_jsonl +=
      R"({"kind": "entity", "id": "Z1", "type": "disease", "names": ["unseen disorder"]})"
      "\n"
      R"({"kind": "triple", "subject": "Z1", "relation": "has_symptom", "object": "S0000"})"
      "\n"
      R"({"kind": "triple", "subject": "D000", "relation": "treated_by", "object": "S0001"})"
      "\n"
      R"({"kind": "gold", "subject": "Z1", "relation": "has_symptom", "objects": ["S0000"]})"
      "\n"
      R"({"kind": "gold", "subject": "D000", "relation": "treated_by", "objects": ["S0001"]})"
      "\n";
  const auto dir = testing::ScratchDir("accounting");
  const auto cfg_path = testing::WriteSynthetic(data, dir, {{"seed", 3}});
  const auto s = ctxprobe::Run(ValidateConfig(cfg_path));
  EXPECT_EQ(s.triples_in, 26u);
  EXPECT_EQ(s.triples_in, s.triples_scored + s.triples_skipped);
  EXPECT_EQ(s.triple_skips.at("no-template"), 1u);
  EXPECT_EQ(s.triple_skips.at("no-context"), 1u);
  EXPECT_EQ(s.series_planned, 24u * 8u);
  EXPECT_EQ(s.series_scored, s.series_planned);
  std::uint64_t skipped = 0;
  for (const auto& [reason, n] : s.series_skips) skipped += n;
  EXPECT_EQ(skipped + s.series_scored, s.series_planned);
}

TEST(Run, ByteBudgetTruncates) {
  const auto s = ctxprobe::Run(ToyConfig("copycat", testing::ScratchDir("budget"),
                               {{"max_input_bytes", 120}}));
  EXPECT_GT(s.series_truncated, 0u);
  EXPECT_GT(s.series_scored, 0u);

  // Too small for even two steps: every series is skipped.
  const auto tiny = ctxprobe::Run(ToyConfig(
      "copycat", testing::ScratchDir("budget-tiny"), {{"max_input_bytes", 10}}));
  EXPECT_EQ(tiny.series_scored, 0u);
  EXPECT_GT(tiny.series_skips.count("truncated"), 0u);
}

// Refuses one candidate surface as untokenizable.
class PickyScorer : public Scorer {
 public:
  explicit PickyScorer(std::string refuse) : refuse_(std::move(refuse)) {}
  std::string Name() const override { return "picky"; }
  std::vector<CandidateScore> Score(const ScoreRequest& req) const override {
    for (std::size_t i = 0; i < req.candidates.size(); ++i) {
      if (req.candidates[i].surface == refuse_) {
        throw ScoreError(ScoreError::Kind::kUntokenizable, "refused", {i});
      }
    }
    return copycat_.Score(req);
  }

 private:
  std::string refuse_;
  CopycatScorer copycat_{1};
};

TEST(Run, UntokenizableCandidatesAreExcluded) {
  const auto cfg = ToyConfig("copycat", testing::ScratchDir("picky"),
                             {{"variants", {"real"}}});
  const auto drop_other = ctxprobe::Run(cfg, PickyScorer("heart murmur"));
  EXPECT_EQ(drop_other.series_scored, 2u);
  const auto drop_target = ctxprobe::Run(cfg, PickyScorer("nasal discharge"));
  EXPECT_EQ(drop_target.series_scored, 0u);
  EXPECT_EQ(drop_target.series_skips.at("untokenizable-target"), 2u);
}

class FailingScorer : public Scorer {
 public:
  std::string Name() const override { return "failing"; }
  std::vector<CandidateScore> Score(const ScoreRequest&) const override {
    throw ScoreError(ScoreError::Kind::kModel, "model exploded");
  }
};

TEST(Run, ScorerErrorsAreRecordedPerItem) {
  const auto s = ctxprobe::Run(ToyConfig("copycat", testing::ScratchDir("failing")),
                     FailingScorer());
  EXPECT_EQ(s.status, "empty");
  EXPECT_EQ(s.series_skips.at("scorer-error"), s.series_planned);
}

TEST(Run, LoadErrorsFailTheRun) {
  RunConfig cfg = ToyConfig("copycat", testing::ScratchDir("load-error"));
  cfg.kb_path = kToyDir / "absent.jsonl";
  EXPECT_THROW(ctxprobe::Run(cfg), ParseError);
}

TEST(Run, RemoteBackendThroughLoopbackSidecar) {
  // Scores by candidate order so ranks are stable; ids echo back.
  httplib::Server server;
  server.Post("/score", [](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    json scores = json::array();
    for (std::size_t i = 0; i < body["candidates"].size(); ++i) {
      scores.push_back(-static_cast<double>(i));
    }
    res.set_content(json{{"id", body["id"]}, {"scores", scores}}.dump(),
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const auto s = ctxprobe::Run(ToyConfig("http://127.0.0.1:" + std::to_string(port),
                               testing::ScratchDir("remote"),
                               {{"concurrency", 3}}));
  server.stop();
  thread.join();
  EXPECT_EQ(s.status, "ok");
  EXPECT_EQ(s.series_scored, s.series_planned);
  EXPECT_EQ(s.aggregate["ucm_m"]["target"]["confuse"], 1.0);
}

}  // namespace
}  // namespace ctxprobe
