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

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <thread>

#include "ctxprobe/context_builder.h"
#include "ctxprobe/errors.h"
#include "ctxprobe/evaluator.h"
#include "ctxprobe/mentions.h"
#include "ctxprobe/random.h"
#include "ctxprobe/records.h"
#include "ctxprobe/remote_scorer.h"
#include "ctxprobe/report.h"
#include "ctxprobe/retrieval.h"
#include "ctxprobe/segmenter.h"
#include "ctxprobe/templates.h"

namespace ctxprobe {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct DocWork {
  const AnnotatedDocument* doc = nullptr;
  Segmentation target;
  std::optional<Segmentation> negative;
};

struct TripleWork {
  std::string prompt;
  std::vector<DocWork> docs;
};

struct Unit {
  std::size_t triple = 0;
  std::size_t doc = 0;
  SeriesVariant variant;
};

struct UnitResult {
  bool scored = false;
  bool truncated = false;
  std::string skip_reason;
  std::vector<RcRecord> records;
  // k -> hit, target-centered series only
  std::map<int, int> hits_without_context;
  std::map<int, int> hits_with_context;
};

json SpanToJson(const Span& s) { return json::array({s.begin, s.end}); }

json SegmentationToJson(const Segmentation& seg, const Triple& triple,
                        Centering centering) {
  json segments = json::array();
  for (const auto& s : seg.segments) {
    segments.push_back({{"label", s.label},
                        {"side", SideName(s.side)},
                        {"span", SpanToJson(s.span)},
                        {"entity", s.mention.entity.str()},
                        {"mention", SpanToJson(s.mention.span)},
                        {"surface", s.mention.surface}});
  }
  auto ids = [](const std::set<EntityId>& set) {
    json out = json::array();
    for (const auto& id : set) out.push_back(id.str());
    return out;
  };
  return {{"triple", triple.Key()},
          {"doc_id", seg.doc_id.str()},
          {"centering", CenteringName(centering)},
          {"center", seg.center.str()},
          {"pool", ids(seg.classification.pool)},
          {"cor", ids(seg.classification.cor)},
          {"incor", ids(seg.classification.incor)},
          {"segments", std::move(segments)}};
}

json OptionalToJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

class Runner {
 public:
  Runner(const RunConfig& config, const KnowledgeBase& kb,
         const std::vector<Document>& docs, const TemplateSet& templates,
         const Scorer& scorer)
      : config_(config),
        kb_(kb),
        docs_(docs),
        templates_(templates),
        scorer_(scorer) {}

  RunSummary Execute();

 private:
  void Plan(RecordWriter& writer);
  UnitResult Process(std::size_t index, RecordWriter& writer) const;
  json Aggregate(const std::vector<UnitResult>& results) const;

  const RunConfig& config_;
  const KnowledgeBase& kb_;
  const std::vector<Document>& docs_;
  const TemplateSet& templates_;
  const Scorer& scorer_;

  RunSummary summary_;
  std::vector<AnnotatedDocument> annotated_;
  std::vector<TripleWork> work_;  // parallel to kb_.triples()
  std::vector<Unit> units_;
};

void Runner::Plan(RecordWriter& writer) {
  const Lexicon lexicon(kb_);
  annotated_ = AnnotateCorpus(docs_, lexicon);
  const SegmentOptions seg_options{config_.max_segments};

  const auto& triples = kb_.triples();
  work_.resize(triples.size());
  summary_.triples_in = triples.size();
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const Triple& triple = triples[t];
    auto tmpl = templates_.find(triple.relation);
    if (tmpl == templates_.end()) {
      ++summary_.triple_skips["no-template"];
      writer.Write("skip", {{"triple", triple.Key()}, {"reason", "no-template"}});
      continue;
    }
    TripleWork& tw = work_[t];
    tw.prompt = InstantiateTemplate(tmpl->second, triple, kb_,
                                    config_.mask_token);
    for (const auto& doc : annotated_) {
      if (!Mentions(doc.mentions, triple.subject) ||
          !Mentions(doc.mentions, triple.object)) {
        continue;
      }
      DocWork dw;
      dw.doc = &doc;
      const auto pool = ClassifyPool(triple, doc.mentions, kb_);
      const EntityMention* center = FirstMentionOf(doc.mentions, triple.object);
      dw.target = SegmentAround(*doc.document, doc.mentions, pool, *center,
                                seg_options);
      dw.negative = RecenterNegative(dw.target, *doc.document, doc.mentions,
                                     seg_options);
      writer.Write("segmentation", SegmentationToJson(dw.target, triple,
                                                      Centering::kTarget));
      if (dw.negative) {
        writer.Write("segmentation", SegmentationToJson(*dw.negative, triple,
                                                        Centering::kNegative));
      }
      tw.docs.push_back(std::move(dw));
    }
    if (tw.docs.empty()) {
      ++summary_.triple_skips["no-context"];
      writer.Write("skip", {{"triple", triple.Key()}, {"reason", "no-context"}});
      continue;
    }
    for (std::size_t d = 0; d < tw.docs.size(); ++d) {
      for (const auto& variant : config_.variants) {
        units_.push_back(Unit{t, d, variant});
      }
    }
  }
  summary_.series_planned = units_.size();
}

UnitResult Runner::Process(std::size_t index, RecordWriter& writer) const {
  const Unit& unit = units_[index];
  const Triple& triple = kb_.triples()[unit.triple];
  const TripleWork& tw = work_[unit.triple];
  const DocWork& dw = tw.docs[unit.doc];
  const Document& doc = *dw.doc->document;
  UnitResult result;

  const json unit_ref = {{"unit", index},
                         {"triple", triple.Key()},
                         {"doc_id", doc.id.str()},
                         {"variant", unit.variant.Name()}};
  auto skip = [&](std::string reason, std::string detail = "") {
    result.skip_reason = std::move(reason);
    json payload = unit_ref;
    payload["reason"] = result.skip_reason;
    if (!detail.empty()) payload["detail"] = std::move(detail);
    writer.Write("skip", std::move(payload));
    return result;
  };

  const bool negative = unit.variant.centering == Centering::kNegative;
  if (negative && !dw.negative) return skip("no-incor");
  const Segmentation& seg = negative ? *dw.negative : dw.target;

  const std::uint64_t seed = DeriveSeed(
      config_.seed, {triple.Key(), doc.id.str(), unit.variant.Name()});
  ProbeSeries series = BuildSeries(seg, tw.prompt, unit.variant.context, seed);
  series.variant = unit.variant;
  series.triple_key = triple.Key();
  series.seed = seed;
  result.truncated = TruncateSeries(series, config_.max_input_bytes) > 0;

  std::vector<Candidate> candidates;
  for (const auto& id : seg.classification.pool) {
    const Entity& e = kb_.Get(id);
    candidates.push_back(Candidate{id, e.canonical_name, e.aliases});
  }

  std::set<EntityId> unscored;
  RankTable table;
  for (bool restart = true; restart;) {
    restart = false;
    table.steps.clear();
    if (series.inputs.size() < 2) return skip("truncated");
    for (std::size_t k = 0; k < series.inputs.size(); ++k) {
      ScoreRequest req;
      req.id = std::to_string(index) + "/" + std::to_string(k) + "/" +
               std::to_string(unscored.size());
      req.input_text = series.inputs[k].FullText();
      req.candidates = candidates;
      req.mask_token = config_.mask_token;
      req.subject = triple.subject;
      req.relation = triple.relation;
      std::vector<CandidateScore> scores;
      try {
        scores = scorer_.Score(req);
      } catch (const ScoreError& e) {
        switch (e.kind()) {
          case ScoreError::Kind::kOverLength:
            series.inputs.resize(k);
            result.truncated = true;
            if (k < 2) return skip("truncated", e.what());
            break;
          case ScoreError::Kind::kUntokenizable: {
            std::set<std::size_t> drop(e.candidate_indices().begin(),
                                       e.candidate_indices().end());
            std::vector<Candidate> kept;
            for (std::size_t i = 0; i < candidates.size(); ++i) {
              if (drop.count(i) != 0) {
                unscored.insert(candidates[i].entity);
                json payload = unit_ref;
                payload.update({{"reason", "untokenizable-candidate"},
                                {"entity", candidates[i].entity.str()}});
                writer.Write("skip", std::move(payload));
              } else {
                kept.push_back(std::move(candidates[i]));
              }
            }
            candidates = std::move(kept);
            if (unscored.count(series.center) != 0 || drop.empty()) {
              return skip("untokenizable-target", e.what());
            }
            restart = true;
            break;
          }
          default:
            return skip("scorer-error", e.what());
        }
        break;
      } catch (const ContractViolation& e) {
        return skip("invalid-request", e.what());
      }
      table.steps.push_back(RanksFromScores(scores));
    }
  }

  result.records = ComputeRc(table, series, seg.classification, unscored);
  result.scored = true;

  if (!negative) {
    const auto& gold = kb_.GoldObjects(triple.subject, triple.relation);
    for (int k : config_.k_values) {
      result.hits_without_context[k] = TopKAcc(table.steps.front(), gold, k);
      result.hits_with_context[k] = TopKAcc(table.steps.back(), gold, k);
    }
  }

  std::vector<std::pair<std::string, json>> out;
  for (std::size_t k = 0; k < series.inputs.size(); ++k) {
    const auto& in = series.inputs[k];
    json payload = unit_ref;
    payload.update({{"step", in.step},
                    {"seed", series.seed},
                    {"context", in.context_text},
                    {"prompt", in.prompt_text},
                    {"arrangement", in.arrangement},
                    {"added_entity", in.added_entity
                                         ? json(in.added_entity->str())
                                         : json(nullptr)},
                    {"added_class", AddedClassName(in.added_class)}});
    out.emplace_back("probe_input", std::move(payload));

    json ranks = json::object();
    for (const auto& [id, rank] : table.steps[k]) ranks[id.str()] = rank;
    json row = unit_ref;
    row.update({{"step", in.step}, {"ranks", std::move(ranks)}});
    out.emplace_back("rank_row", std::move(row));
  }
  for (const auto& r : result.records) {
    json payload = unit_ref;
    payload.update({{"step", r.step},
                    {"added", r.added.str()},
                    {"added_class", AddedClassName(r.added_class)},
                    {"rc_target", r.rc_target},
                    {"rc_added", r.rc_added},
                    {"rc_cor_avg", OptionalToJson(r.rc_cor_avg)},
                    {"rc_incor_avg", OptionalToJson(r.rc_incor_avg)}});
    out.emplace_back("rc_record", std::move(payload));
  }
  writer.WriteBatch(std::move(out));
  return result;
}

json Runner::Aggregate(const std::vector<UnitResult>& results) const {
  using CountMap = std::map<std::string, UcmCounts>;
  std::map<Centering, std::map<RelationId, std::vector<RcRecord>>> by_relation;
  std::map<Centering, UcmCounts> pooled;
  std::map<Centering, CountMap> by_source;
  CountMap by_variant;
  RcBehavior behavior;
  std::map<std::string, RcBehavior> behavior_by_variant;
  std::set<Centering> centerings_run;

  struct TopK {
    std::uint64_t n = 0;
    std::map<int, std::uint64_t> without_context;
    std::map<int, std::uint64_t> with_context;
  };
  std::map<RelationId, TopK> topk;

  for (const auto& v : config_.variants) centerings_run.insert(v.centering);

  for (std::size_t i = 0; i < units_.size(); ++i) {
    const UnitResult& r = results[i];
    if (!r.scored) continue;
    const Unit& unit = units_[i];
    const Triple& triple = kb_.triples()[unit.triple];
    const std::string& source =
        work_[unit.triple].docs[unit.doc].doc->document->source;
    const Centering c = unit.variant.centering;

    auto& list = by_relation[c][triple.relation];
    list.insert(list.end(), r.records.begin(), r.records.end());
    const UcmCounts counts = CountUcm(r.records);
    pooled[c] += counts;
    by_source[c][source] += counts;
    by_variant[unit.variant.Name()] += counts;

    if (c == Centering::kTarget) {
      RcBehavior local;
      for (const auto& rec : r.records) local.Add(rec);
      behavior += local;
      behavior_by_variant[std::string(ContextVariantName(unit.variant.context))] +=
          local;

      TopK& tk = topk[triple.relation];
      ++tk.n;
      for (const auto& [k, hit] : r.hits_without_context) {
        tk.without_context[k] += static_cast<std::uint64_t>(hit);
      }
      for (const auto& [k, hit] : r.hits_with_context) {
        tk.with_context[k] += static_cast<std::uint64_t>(hit);
      }
    }
  }

  json agg;
  agg["schema"] = kAggregateSchema;
  agg["run_id"] = summary_.run_id;
  agg["config_hash"] = summary_.config_hash;
  agg["model"] = scorer_.Name();
  agg["seed"] = config_.seed;
  json variants = json::array();
  for (const auto& v : config_.variants) variants.push_back(v.Name());
  agg["variants"] = variants;
  agg["k"] = config_.k_values;

  agg["counts"] = {{"triples_in", summary_.triples_in},
                   {"triples_scored", summary_.triples_scored},
                   {"triples_skipped", summary_.triples_skipped},
                   {"triple_skips", summary_.triple_skips},
                   {"series_planned", summary_.series_planned},
                   {"series_scored", summary_.series_scored},
                   {"series_truncated", summary_.series_truncated},
                   {"series_skips", summary_.series_skips},
                   {"rc_records", summary_.rc_records}};

  json rc = {{"pooled", RcBehaviorToJson(behavior)}, {"by_variant", json::object()}};
  for (const auto& v : config_.variants) {
    if (v.centering != Centering::kTarget) continue;
    const std::string name(ContextVariantName(v.context));
    auto it = behavior_by_variant.find(name);
    rc["by_variant"][name] =
        RcBehaviorToJson(it == behavior_by_variant.end() ? RcBehavior{} : it->second);
  }
  agg["rc_behavior"] = std::move(rc);

  json ucm_k = json::object();
  json ucm_m = json::object();
  json sources = json::object();
  json macro = json::object();
  for (Centering c : {Centering::kTarget, Centering::kNegative}) {
    const std::string name(CenteringName(c));
    if (centerings_run.count(c) == 0) {
      ucm_k[name] = nullptr;
      ucm_m[name] = nullptr;
      sources[name] = nullptr;
      macro[name] = nullptr;
      continue;
    }
    json per_relation = json::object();
    // Every probed relation gets a row, scored or not.
    std::set<RelationId> relations;
    for (const auto& t : kb_.triples()) relations.insert(t.relation);
    for (const auto& rel : relations) {
      auto it = by_relation[c].find(rel);
      per_relation[rel.str()] =
          UcmToJson(it == by_relation[c].end() ? UcmScore{}
                                               : ToScore(CountUcm(it->second)));
    }
    ucm_k[name] = std::move(per_relation);
    ucm_m[name] = UcmToJson(ToScore(pooled[c]));

    json per_source = json::object();
    double u = 0, cf = 0, m = 0;
    std::uint64_t defined = 0;
    std::set<std::string> all_sources;
    for (const auto& d : docs_) all_sources.insert(d.source);
    for (const auto& src : all_sources) {
      const UcmScore s = ToScore(by_source[c][src]);
      per_source[src] = UcmToJson(s);
      if (s.defined()) {
        u += s.understand;
        cf += s.confuse;
        m += s.misunderstand;
        ++defined;
      }
    }
    sources[name] = std::move(per_source);
    if (defined == 0) {
      macro[name] = UcmToJson(UcmScore{});
    } else {
      const double n = static_cast<double>(defined);
      macro[name] = {{"n", defined},
                     {"understand", u / n},
                     {"confuse", cf / n},
                     {"misunderstand", m / n}};
    }
  }
  json per_variant = json::object();
  for (const auto& v : config_.variants) {
    per_variant[v.Name()] = UcmToJson(ToScore(by_variant[v.Name()]));
  }
  ucm_m["by_variant"] = std::move(per_variant);
  ucm_m["by_source"] = std::move(sources);
  ucm_m["macro_by_source"] = std::move(macro);
  agg["ucm_k"] = std::move(ucm_k);
  agg["ucm_m"] = std::move(ucm_m);

  json tk_json = json::object();
  for (const auto& [rel, tk] : topk) {
    json without = json::object();
    json with = json::object();
    for (int k : config_.k_values) {
      const double n = static_cast<double>(tk.n);
      without[std::to_string(k)] =
          tk.n == 0 ? json(nullptr) : json(tk.without_context.at(k) / n);
      with[std::to_string(k)] =
          tk.n == 0 ? json(nullptr) : json(tk.with_context.at(k) / n);
    }
    tk_json[rel.str()] = {{"n", tk.n},
                          {"without_context", std::move(without)},
                          {"with_context", std::move(with)}};
  }
  agg["topk"] = std::move(tk_json);
  return agg;
}

RunSummary Runner::Execute() {
  summary_.config_hash = ConfigHash(config_);
  summary_.run_id = "run-" + summary_.config_hash.substr(0, 12);
  summary_.run_dir = config_.out_dir / summary_.run_id;
  fs::create_directories(summary_.run_dir);
  {
    std::ofstream echo(summary_.run_dir / kConfigEchoFile);
    echo << ConfigToJson(config_).dump(2) << "\n";
  }

  RecordWriter writer(summary_.run_dir / kRecordsFile, summary_.run_id,
                      summary_.config_hash);
  Plan(writer);

  std::vector<UnitResult> results(units_.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < units_.size(); i = next++) {
      try {
        results[i] = Process(i, writer);
      } catch (const std::exception& e) {
        results[i] = UnitResult{};
        results[i].skip_reason = "error";
        writer.Write("skip", {{"unit", i},
                              {"reason", "error"},
                              {"detail", e.what()}});
      }
    }
  };
  {
    const std::size_t n_workers = std::max<std::size_t>(
        1, std::min<std::size_t>(config_.concurrency, units_.size()));
    std::vector<std::jthread> workers;
    for (std::size_t w = 1; w < n_workers; ++w) workers.emplace_back(work);
    work();
  }

  std::vector<bool> triple_scored(kb_.triples().size(), false);
  for (std::size_t i = 0; i < units_.size(); ++i) {
    const UnitResult& r = results[i];
    if (r.truncated) ++summary_.series_truncated;
    if (r.scored) {
      ++summary_.series_scored;
      summary_.rc_records += r.records.size();
      triple_scored[units_[i].triple] = true;
    } else {
      ++summary_.series_skips[r.skip_reason];
    }
  }
  for (std::size_t t = 0; t < triple_scored.size(); ++t) {
    if (triple_scored[t]) {
      ++summary_.triples_scored;
    } else if (!work_[t].docs.empty()) {
      ++summary_.triple_skips["no-scored-series"];
    }
  }
  summary_.triples_skipped = summary_.triples_in - summary_.triples_scored;
  summary_.status = summary_.series_scored == 0 ? "empty" : "ok";

  summary_.aggregate = Aggregate(results);
  summary_.aggregate["status"] = summary_.status;
  writer.Write("aggregate", summary_.aggregate);
  {
    std::ofstream out(summary_.run_dir / kAggregateFile);
    out << SerializeAggregate(summary_.aggregate);
  }
  {
    std::ofstream out(summary_.run_dir / kReportFile);
    out << RenderReport(summary_.aggregate);
  }
  return summary_;
}

struct LoadedInputs {
  KnowledgeBase kb;
  std::vector<Document> docs;
  TemplateSet templates;
};

LoadedInputs LoadInputs(const RunConfig& config) {
  LoadedInputs in;
  in.kb = LoadKb(config.kb_path);
  std::vector<Corpus> parts;
  for (const auto& spec : config.corpora) {
    parts.push_back(LoadCorpus(spec.path, spec.source));
  }
  in.docs = MergeCorpora(std::move(parts)).documents;
  in.templates = LoadTemplates(config.templates_path);
  return in;
}

}  // namespace

std::unique_ptr<Scorer> MakeScorer(const RunConfig& config,
                                   const KnowledgeBase& kb) {
  if (config.remote()) {
    RemoteOptions options;
    options.max_retries = config.retries;
    options.timeout = std::chrono::milliseconds(config.timeout_ms);
    options.max_in_flight = config.concurrency;
    options.log = [](std::string_view msg) { std::cerr << msg << "\n"; };
    return std::make_unique<RemoteScorer>(config.backend, options);
  }
  auto scorer = MakeMockScorer(config.backend, kb, config.seed);
  if (!scorer) {
    throw ConfigError("backend", "unknown backend '" + config.backend + "'");
  }
  return scorer;
}

RunSummary Run(const RunConfig& config) {
  LoadedInputs in = LoadInputs(config);
  auto scorer = MakeScorer(config, in.kb);
  Runner runner(config, in.kb, in.docs, in.templates, *scorer);
  return runner.Execute();
}

RunSummary Run(const RunConfig& config, const Scorer& scorer) {
  LoadedInputs in = LoadInputs(config);
  Runner runner(config, in.kb, in.docs, in.templates, scorer);
  return runner.Execute();
}

}  // namespace ctxprobe
