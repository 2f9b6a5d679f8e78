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

// ctxprobe: run context-variance probes and print their reports.
//
//   ctxprobe validate <config>
//   ctxprobe run <config> [--seed N] [--backend B] [--variants a,b] [--k 1,5]
//                         [--out DIR]
//   ctxprobe report <run-id> [--out DIR]

#include <cstdlib>
#include <iostream>
#include <optional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctxprobe/config.h"
#include "ctxprobe/errors.h"
#include "ctxprobe/pipeline.h"
#include "ctxprobe/report.h"

namespace {

using nlohmann::json;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::string backend;
  std::vector<std::string> variants;
  std::vector<int> k;
  std::string out;

  json ToJson() const {
    json o = json::object();
    if (seed) o["seed"] = *seed;
    if (!backend.empty()) o["backend"] = backend;
    if (!variants.empty()) o["variants"] = variants;
    if (!k.empty()) o["k"] = k;
    if (!out.empty()) o["out"] = out;
    return o;
  }
};

void AddOverrideFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Run seed");
  cmd->add_option("--backend", o.backend,
                  "uniform, copycat, oracle, remote or an http:// endpoint");
  cmd->add_option("--variants", o.variants,
                  "Comma list, e.g. real,knowledge_only:negative")
      ->delimiter(',');
  cmd->add_option("--k", o.k, "Comma list of Top-k cutoffs")->delimiter(',');
  cmd->add_option("--out", o.out, "Output directory");
}

int PrintSummary(const ctxprobe::RunSummary& s) {
  json out = {{"run_id", s.run_id},
              {"status", s.status},
              {"run_dir", s.run_dir.string()},
              {"triples_in", s.triples_in},
              {"triples_scored", s.triples_scored},
              {"triples_skipped", s.triples_skipped},
              {"triple_skips", s.triple_skips},
              {"series_planned", s.series_planned},
              {"series_scored", s.series_scored},
              {"series_truncated", s.series_truncated},
              {"series_skips", s.series_skips},
              {"rc_records", s.rc_records},
              {"ucm_m", s.aggregate.at("ucm_m")}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-variance knowledge probing"};
  app.require_subcommand(1);

  std::string config_path;
  std::string run_id;
  Overrides run_overrides;
  Overrides validate_overrides;
  std::string report_out = "runs";

  CLI::App* run = app.add_subcommand("run", "Execute a probing run");
  run->add_option("config", config_path, "Config file")->required();
  AddOverrideFlags(run, run_overrides);

  CLI::App* validate =
      app.add_subcommand("validate", "Check a config and print it normalized");
  validate->add_option("config", config_path, "Config file")->required();
  AddOverrideFlags(validate, validate_overrides);

  CLI::App* report = app.add_subcommand("report", "Print a finished run's tables");
  report->add_option("run-id", run_id, "Run id, e.g. run-0123456789ab")
      ->required();
  report->add_option("--out", report_out, "Output directory holding the run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto cfg =
          ctxprobe::ValidateConfig(config_path, validate_overrides.ToJson());
      std::cout << ctxprobe::ConfigToJson(cfg).dump(2) << "\n";
      return 0;
    }
    if (*run) {
      const auto cfg =
          ctxprobe::ValidateConfig(config_path, run_overrides.ToJson());
      return PrintSummary(ctxprobe::Run(cfg));
    }
    if (*report) {
      std::cout << ctxprobe::EmitReport(report_out, run_id);
      return 0;
    }
  } catch (const ctxprobe::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
