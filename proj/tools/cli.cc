// Copyright 2026 The Coltype Authors.
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

#include "cli.h"

#include <csignal>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coltype/config.h"
#include "coltype/corpus.h"
#include "coltype/dpbd.h"
#include "coltype/ensemble.h"
#include "coltype/eval.h"
#include "coltype/global_model.h"
#include "coltype/model.h"
#include "coltype/serialization.h"
#include "coltype/server.h"
#include "coltype/store.h"
#include "coltype/synth.h"
#include "coltype/text.h"
#include "fmt/format.h"
#include "httplib.h"

namespace coltype {
namespace {

namespace fs = std::filesystem;

// Flags shared by the commands that run the pipeline.
struct PipelineFlags {
  std::string data = "data";
  std::string tenant;
  std::vector<std::string> config;
  std::optional<int> top_k;
  std::optional<double> tau;
  std::optional<double> gate;

  void Add(CLI::App* app) {
    app->add_option("--data", data, "Data directory")->capture_default_str();
    app->add_option("--tenant", tenant, "Tenant whose local model to apply");
    app->add_option("--config", config, "Config override key=value");
    app->add_option("--top-k", top_k, "Types per column")
        ->check(CLI::PositiveNumber);
    app->add_option("--tau", tau, "Abstention threshold")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--gate", gate, "Stage gate c")
        ->check(CLI::Range(0.0, 1.0));
  }

  std::vector<std::string> Overrides() const {
    std::vector<std::string> overrides = config;
    if (top_k) overrides.push_back(fmt::format("top_k={}", *top_k));
    if (tau) overrides.push_back(fmt::format("abstain_threshold={}", *tau));
    if (gate) overrides.push_back(fmt::format("stage_gate={}", *gate));
    return overrides;
  }
};

// Prints `status` and returns the exit code for it.
int Fail(std::ostream& err, const absl::Status& status, int code) {
  err << "coltype: " << status.message() << "\n";
  return code;
}

// Loads the global model; usage errors (bad overrides) and state errors are
// told apart.
std::optional<GlobalModel> LoadGlobal(const PipelineFlags& flags,
                                      std::ostream& err, int& code,
                                      bool load_params = true) {
  PipelineConfig probe;
  for (const std::string& assignment : flags.Overrides()) {
    if (absl::Status s = ApplyConfigOverride(probe, assignment); !s.ok()) {
      code = Fail(err, s, kExitUsage);
      return std::nullopt;
    }
  }
  absl::StatusOr<GlobalModel> global = LoadGlobalModel(
      fs::path(flags.data) / "global", flags.Overrides(), load_params);
  if (!global.ok()) {
    code = Fail(err, global.status(), kExitState);
    return std::nullopt;
  }
  return *std::move(global);
}

std::optional<TenantModel> LoadTenantFor(const GlobalModel& global,
                                         const PipelineFlags& flags,
                                         std::ostream& err, int& code) {
  if (flags.tenant.empty()) return NewTenant(global, "");
  if (!IsValidTenantId(flags.tenant)) {
    code = Fail(err,
                absl::InvalidArgumentError(
                    StrCat("invalid tenant id '", flags.tenant, "'")),
                kExitUsage);
    return std::nullopt;
  }
  absl::StatusOr<TenantModel> tenant = LoadTenant(
      global, fs::path(flags.data) / "tenants" / flags.tenant, flags.tenant);
  if (!tenant.ok()) {
    code = Fail(err, tenant.status(), kExitState);
    return std::nullopt;
  }
  return *std::move(tenant);
}

int Detect(const PipelineFlags& flags, const std::string& csv_path,
           const std::string& table_id_flag, const std::string& delimiter,
           bool no_header, std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::string> bytes = ReadFile(csv_path);
  if (!bytes.ok()) return Fail(err, bytes.status(), kExitUsage);
  if (delimiter.size() != 1) {
    return Fail(err,
                absl::InvalidArgumentError(
                    "--delimiter must be a single character"),
                kExitUsage);
  }
  int code = kExitOk;
  std::optional<GlobalModel> global = LoadGlobal(flags, err, code);
  if (!global) return code;
  std::optional<TenantModel> tenant = LoadTenantFor(*global, flags, err, code);
  if (!tenant) return code;

  CsvOptions options;
  options.delimiter = delimiter.front();
  options.has_header = !no_header;
  options.max_rows = global->config.max_rows;
  absl::StatusOr<Table> table = ParseCsv(*bytes, options);
  if (!table.ok()) return Fail(err, table.status(), kExitUsage);
  table->table_id = table_id_flag.empty() ? fs::path(csv_path).stem().string()
                                          : table_id_flag;
  absl::StatusOr<std::vector<FinalPrediction>> predictions = RunPipeline(
      *table, MakePipelineModel(*global, *tenant), global->config);
  if (!predictions.ok()) return Fail(err, predictions.status(), kExitState);
  out << DumpJson(PredictionsToJson(table->table_id,
                                    tenant->ontology.version(),
                                    tenant->revision(), *predictions));
  return kExitOk;
}

std::atomic<httplib::Server*> g_server{nullptr};

void StopServer(int) {
  if (httplib::Server* server = g_server.load()) server->stop();
}

int Serve(const PipelineFlags& flags, const std::string& host, int port,
          size_t max_upload_bytes, std::ostream& out, std::ostream& err) {
  StoreOptions options;
  options.data_dir = flags.data;
  options.config_overrides = flags.Overrides();
  options.max_upload_bytes = max_upload_bytes;
  absl::StatusOr<std::unique_ptr<Store>> store = Store::Open(options);
  if (!store.ok()) return Fail(err, store.status(), kExitState);
  httplib::Server server;
  server.set_payload_max_length(max_upload_bytes + 1);
  RegisterRoutes(server, **store);
  if (!server.bind_to_port(host, port)) {
    return Fail(err,
                absl::UnavailableError(
                    fmt::format("cannot listen on {}:{}", host, port)),
                kExitUsage);
  }
  g_server = &server;
  std::signal(SIGINT, StopServer);
  std::signal(SIGTERM, StopServer);
  out << fmt::format("listening on http://{}:{}\n", host, port) << std::flush;
  server.listen_after_bind();
  g_server = nullptr;
  return kExitOk;
}

// Labeled corpus plus its predictions under the flags' model.
struct EvalInputs {
  std::optional<GlobalModel> global;
  std::optional<TenantModel> tenant;
  std::vector<AnnotatedTable> corpus;
  std::vector<std::vector<FinalPrediction>> per_table;
  std::vector<LabeledPrediction> labeled;
};

int PrepareEval(const PipelineFlags& flags, const std::string& corpus_dir,
                EvalInputs& inputs, std::ostream& err) {
  int code = kExitOk;
  absl::StatusOr<std::vector<AnnotatedTable>> corpus =
      LoadLabeledCorpus(corpus_dir);
  if (!corpus.ok()) return Fail(err, corpus.status(), kExitUsage);
  inputs.corpus = *std::move(corpus);
  inputs.global = LoadGlobal(flags, err, code);
  if (!inputs.global) return code;
  inputs.tenant = LoadTenantFor(*inputs.global, flags, err, code);
  if (!inputs.tenant) return code;
  const PipelineModel model = MakePipelineModel(*inputs.global, *inputs.tenant);
  for (const AnnotatedTable& table : inputs.corpus) {
    absl::StatusOr<std::vector<FinalPrediction>> predictions =
        RunPipeline(table.table, model, inputs.global->config);
    if (!predictions.ok()) return Fail(err, predictions.status(), kExitState);
    for (size_t c = 0; c < predictions->size(); ++c) {
      if (table.annotation(c).empty()) continue;
      inputs.labeled.push_back(
          {table.table.table_id,
           EffectiveTruth(table.annotation(c), inputs.tenant->ontology),
           (*predictions)[c]});
    }
    inputs.per_table.push_back(*std::move(predictions));
  }
  if (inputs.labeled.empty()) {
    return Fail(err,
                absl::InvalidArgumentError(
                    StrCat("no labeled columns under ", corpus_dir)),
                kExitUsage);
  }
  return kExitOk;
}

int Eval(const PipelineFlags& flags, const std::string& corpus_dir,
         bool sweep, std::optional<double> target_precision,
         const std::string& predictions_out, const std::string& format,
         std::ostream& out, std::ostream& err) {
  EvalInputs inputs;
  if (int code = PrepareEval(flags, corpus_dir, inputs, err); code != kExitOk) {
    return code;
  }
  const PipelineConfig& config = inputs.global->config;
  double tau = config.abstain_threshold;
  Json result = Json::object();
  if (target_precision) {
    const TauCalibration calibration =
        CalibrateTau(ToScored(inputs.labeled), *target_precision);
    if (calibration.warning) {
      err << fmt::format(
          "coltype: warning: precision {} is unattainable; tau set to 1\n",
          *target_precision);
    }
    tau = calibration.tau;
    result["calibration"] = {
        {"target_precision", *target_precision},
        {"tau", calibration.tau},
        {"warning", calibration.warning},
        {"precision",
         calibration.precision ? Json(*calibration.precision) : Json()},
        {"coverage", calibration.coverage}};
  }
  const EvalReport report =
      Evaluate(inputs.labeled, tau, config.stage_gate, config.top_k);
  result["report"] = EvalReportToJson(report);
  if (sweep) {
    Json curve = Json::array();
    for (const EvalReport& point :
         SweepTau(inputs.labeled, config.stage_gate, config.top_k)) {
      curve.push_back(
          {{"tau", point.tau},
           {"precision", point.precision ? Json(*point.precision) : Json()},
           {"coverage", point.coverage}});
    }
    result["curve"] = std::move(curve);
  }
  if (!predictions_out.empty()) {
    std::string lines;
    for (size_t t = 0; t < inputs.corpus.size(); ++t) {
      std::vector<FinalPrediction> thresholded;
      for (const FinalPrediction& p : inputs.per_table[t]) {
        thresholded.push_back(ApplyThreshold(p, tau, config.top_k));
      }
      lines += DumpJson(PredictionsToJson(
          inputs.corpus[t].table.table_id, inputs.tenant->ontology.version(),
          inputs.tenant->revision(), thresholded));
    }
    if (absl::Status s = WriteFileAtomic(predictions_out, lines); !s.ok()) {
      return Fail(err, s, kExitUsage);
    }
  }
  if (format == "table") {
    out << EvalReportToText(report);
    if (sweep) {
      out << "\n  tau  precision  coverage\n";
      for (const Json& point : result["curve"]) {
        out << fmt::format(
            "{:5.2f}  {:>9}  {:8.3f}\n", point["tau"].get<double>(),
            point["precision"].is_null()
                ? std::string("-")
                : fmt::format("{:.3f}", point["precision"].get<double>()),
            point["coverage"].get<double>());
      }
    }
  } else {
    out << DumpJson(result);
  }
  return kExitOk;
}

int Calibrate(const PipelineFlags& flags, const std::string& corpus_dir,
              double target_precision, std::ostream& out, std::ostream& err) {
  EvalInputs inputs;
  if (int code = PrepareEval(flags, corpus_dir, inputs, err); code != kExitOk) {
    return code;
  }
  const TauCalibration calibration =
      CalibrateTau(ToScored(inputs.labeled), target_precision);
  if (calibration.warning) {
    err << fmt::format(
        "coltype: warning: precision {} is unattainable; tau set to 1\n",
        target_precision);
  }
  out << DumpJson(
      {{"target_precision", target_precision},
       {"tau", calibration.tau},
       {"warning", calibration.warning},
       {"precision",
        calibration.precision ? Json(*calibration.precision) : Json()},
       {"coverage", calibration.coverage},
       {"columns", inputs.labeled.size()}});
  return kExitOk;
}

int Replay(const PipelineFlags& flags, const std::string& log_path,
           std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::string> log = ReadFile(log_path);
  if (!log.ok()) return Fail(err, log.status(), kExitUsage);
  std::vector<std::string> lines;
  for (std::string_view line : Split(*log, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
  }
  while (!lines.empty() && TrimWhitespace(lines.back()).empty()) {
    lines.pop_back();
  }
  std::string tenant_id = flags.tenant;
  if (tenant_id.empty() && !lines.empty()) {
    Json first = Json::parse(lines.front(), nullptr, false);
    if (first.is_object() && first.contains("tenant_id") &&
        first["tenant_id"].is_string()) {
      tenant_id = first["tenant_id"].get<std::string>();
    }
  }
  int code = kExitOk;
  std::optional<GlobalModel> global = LoadGlobal(flags, err, code);
  if (!global) return code;
  TenantModel tenant = NewTenant(*global, tenant_id);
  const fs::path tenant_dir = fs::path(flags.data) / "tenants" / tenant_id;
  absl::Status status = ReplayFeedback(
      *global, tenant, lines,
      [&tenant_dir](std::string_view table_id) {
        return LoadStoredTable(tenant_dir, table_id);
      });
  if (!status.ok()) return Fail(err, status, kExitUsage);
  Json summary = TenantStateToJson(*global, tenant);
  Json reports = Json::array();
  size_t retrains = 0;
  for (const auto& [id, report] : tenant.reports) {
    if (report.retrained) ++retrains;
    reports.push_back({{"event_id", id},
                       {"kind", FeedbackKindName(report.kind)},
                       {"type_id", report.type_id},
                       {"new_lfs", report.new_lfs.size()},
                       {"n_generated", report.n_generated},
                       {"retrained", report.retrained}});
  }
  summary["events_applied"] = tenant.events_applied;
  summary["retrained"] = retrains > 0;
  summary["reports"] = std::move(reports);
  out << DumpJson(summary);
  return kExitOk;
}

int Train(const PipelineFlags& flags, std::optional<size_t> background,
          const TrainConfig& train_config, std::ostream& out,
          std::ostream& err) {
  int code = kExitOk;
  std::optional<GlobalModel> global =
      LoadGlobal(flags, err, code, /*load_params=*/false);
  if (!global) return code;
  size_t seeds = 0;
  for (const AnnotatedTable& table : global->corpus) {
    for (size_t c = 0; c < table.table.columns.size(); ++c) {
      if (global->ontology.Contains(table.annotation(c))) ++seeds;
    }
  }
  absl::StatusOr<std::vector<LabeledExample>> examples =
      BuildGlobalTrainingSet(*global, background.value_or(seeds / 4 + 1),
                             train_config.seed);
  if (!examples.ok()) return Fail(err, examples.status(), kExitState);
  absl::StatusOr<TrainResult> result = TrainWithHistory(
      *examples, GlobalLabels(global->ontology), train_config);
  if (!result.ok()) return Fail(err, result.status(), kExitState);
  const fs::path path = fs::path(flags.data) / "global" / "params.snap";
  if (absl::Status s =
          WriteFileAtomic(path, SerializeGlobalParams(result->params, *examples));
      !s.ok()) {
    return Fail(err, s, kExitState);
  }
  out << DumpJson({{"params", path.string()},
                   {"examples", examples->size()},
                   {"labels", result->params.labels.size()},
                   {"dimension", result->params.dimension},
                   {"final_loss", result->epoch_losses.empty()
                                      ? Json()
                                      : Json(result->epoch_losses.back())}});
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Semantic column type detection with per-tenant adaptation",
               "coltype"};
  app.require_subcommand(1);

  PipelineFlags flags;

  std::string csv_path, table_id, delimiter = ",";
  bool no_header = false;
  CLI::App* detect = app.add_subcommand("detect", "Predict column types");
  detect->add_option("csv", csv_path, "CSV file")->required();
  detect->add_option("--table-id", table_id,
                     "Table id in the output (default: file stem)");
  detect->add_option("--delimiter", delimiter, "Field delimiter");
  detect->add_flag("--no-header", no_header, "First row is data");
  flags.Add(detect);

  std::string host = "127.0.0.1";
  int port = 8080;
  size_t max_upload = size_t{16} << 20;
  CLI::App* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--max-upload-bytes", max_upload)->capture_default_str();
  flags.Add(serve);

  std::string corpus_dir, predictions_out, format = "json";
  bool sweep = false;
  std::optional<double> target_precision;
  CLI::App* eval = app.add_subcommand("eval", "Precision and coverage");
  eval->add_option("corpus", corpus_dir, "Labeled corpus directory")
      ->required();
  eval->add_flag("--sweep-tau", sweep, "Report the curve over the tau grid");
  eval->add_option("--target-precision", target_precision,
                   "Calibrate tau for this precision first")
      ->check(CLI::Range(0.0, 1.0));
  eval->add_option("--predictions-out", predictions_out,
                   "Write per-table prediction JSON lines here");
  eval->add_option("--format", format)
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  flags.Add(eval);

  double calibrate_target = 0.95;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Choose tau on a validation corpus");
  calibrate->add_option("corpus", corpus_dir, "Labeled validation corpus")
      ->required();
  calibrate->add_option("--target-precision", calibrate_target)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  flags.Add(calibrate);

  std::string log_path;
  CLI::App* replay =
      app.add_subcommand("replay", "Rebuild tenant state from a feedback log");
  replay->add_option("log", log_path, "feedback.jsonl")->required();
  flags.Add(replay);

  std::optional<size_t> background;
  TrainConfig train_config;
  CLI::App* train =
      app.add_subcommand("train", "Train the global classifier on the corpus");
  train->add_option("--background", background,
                    "Background (unknown) examples");
  train->add_option("--seed", train_config.seed)->capture_default_str();
  train->add_option("--epochs", train_config.epochs)->capture_default_str();
  train->add_option("--learning-rate", train_config.learning_rate)
      ->capture_default_str();
  train->add_option("--batch-size", train_config.batch_size)
      ->capture_default_str();
  train->add_option("--l2", train_config.l2)->capture_default_str();
  flags.Add(train);

  std::string synth_out = "data";
  uint64_t synth_seed = 7;
  bool synth_no_train = false;
  CLI::App* synth = app.add_subcommand(
      "synth", "Write a synthetic demo data directory and train it");
  synth->add_option("--out", synth_out)->capture_default_str();
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_flag("--no-train", synth_no_train);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (detect->parsed()) {
    return Detect(flags, csv_path, table_id, delimiter, no_header, out, err);
  }
  if (serve->parsed()) return Serve(flags, host, port, max_upload, out, err);
  if (eval->parsed()) {
    return Eval(flags, corpus_dir, sweep, target_precision, predictions_out,
                format, out, err);
  }
  if (calibrate->parsed()) {
    return Calibrate(flags, corpus_dir, calibrate_target, out, err);
  }
  if (replay->parsed()) return Replay(flags, log_path, out, err);
  if (train->parsed()) return Train(flags, background, train_config, out, err);
  if (synth->parsed()) {
    if (absl::Status s = synth::WriteDemoData(synth_out, synth_seed);
        !s.ok()) {
      return Fail(err, s, kExitState);
    }
    if (synth_no_train) return kExitOk;
    PipelineFlags synth_flags;
    synth_flags.data = synth_out;
    TrainConfig config;
    config.seed = synth_seed;
    return Train(synth_flags, std::nullopt, config, out, err);
  }
  return kExitUsage;
}

}  // namespace coltype
