#include "sentivote/cli.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sentivote/ensemble.hpp"
#include "sentivote/errors.hpp"
#include "sentivote/ingest.hpp"
#include "sentivote/kernels.hpp"
#include "sentivote/manifest.hpp"
#include "sentivote/metrics.hpp"
#include "sentivote/report.hpp"
#include "sentivote/simgen.hpp"

namespace sentivote {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct CommonOptions {
  std::string schema_path;
  std::string timestamp;
  std::vector<std::string> command_line;
};

struct BundleOptions {
  std::string dataset;
  std::vector<std::string> preds;
  std::string average = "all";
  bool full_precision = false;
  std::string jsonl;
  std::string weights_from;
};

LabelSchema load_schema(const CommonOptions& common) {
  return common.schema_path.empty() ? LabelSchema::default_schema()
                                    : LabelSchema::from_file(common.schema_path);
}

std::vector<Average> averages_for(const std::string& name) {
  if (name == "all") return {Average::Micro, Average::Macro, Average::Weighted};
  return {parse_average(name)};
}

std::vector<fs::path> input_paths(const CommonOptions& common, const BundleOptions& opts) {
  std::vector<fs::path> paths;
  if (!common.schema_path.empty()) paths.emplace_back(common.schema_path);
  paths.emplace_back(opts.dataset);
  for (const auto& p : opts.preds) paths.emplace_back(p);
  if (!opts.weights_from.empty()) paths.emplace_back(opts.weights_from);
  return paths;
}

RunManifest manifest_for(const CommonOptions& common, const std::vector<fs::path>& inputs,
                         const LabelSchema& schema, Json config) {
  auto m = make_manifest(common.command_line, inputs, schema,
                         common.timestamp.empty() ? utc_timestamp_now() : common.timestamp);
  m.config = std::move(config);
  return m;
}

void print_manifest_banner(std::ostream& out, const RunManifest& m, const std::string& command) {
  out << "# sentivote " << m.tool_version << ' ' << command << '\n';
  for (const auto& input : m.inputs) out << "# " << input.path << " sha256:" << input.sha256 << '\n';
}

void write_jsonl(const std::string& path, const RunManifest& m, const std::vector<Json>& records) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write report", path);
  out << m.to_json().dump() << '\n';
  for (const auto& r : records) out << r.dump() << '\n';
}

Bundle load_bundle(const BundleOptions& opts, const LabelSchema& schema) {
  auto dataset = load_dataset(opts.dataset, schema);
  std::vector<ModelRun> runs;
  for (const auto& pred : opts.preds) runs.push_back(load_predictions(pred, dataset, schema));
  return validate_bundle(std::move(runs), std::move(dataset), schema);
}

// Replaces declared weights with accuracies measured by an earlier `evaluate`.
void override_weights(Bundle& bundle, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open weights report", path);
  std::map<std::string, double> measured;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error&) {
      throw Error(ErrorKind::MalformedRow, "invalid JSON record", path + ":" + std::to_string(line_no));
    }
    if (j.value("type", "") == "eval" && j.contains("model_id") && j.contains("accuracy")) {
      measured[j["model_id"].get<std::string>()] = j["accuracy"].get<double>();
    }
  }
  for (auto& run : bundle.runs) {
    if (const auto it = measured.find(run.model_id); it != measured.end()) run.weight = it->second;
  }
}

Json bundle_config(const BundleOptions& opts) {
  Json config;
  config["dataset"] = opts.dataset;
  config["preds"] = opts.preds;
  config["average"] = opts.average;
  config["full_precision"] = opts.full_precision;
  if (!opts.weights_from.empty()) config["weights_from"] = opts.weights_from;
  return config;
}

int cmd_validate(const CommonOptions& common, const BundleOptions& opts, std::ostream& out,
                 std::ostream& err) {
  const auto schema = load_schema(common);
  GoldDataset dataset;
  try {
    dataset = load_dataset(opts.dataset, schema);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  bool ok = true;
  std::vector<ModelRun> runs;
  for (const auto& pred : opts.preds) {
    try {
      runs.push_back(load_predictions(pred, dataset, schema));
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      ok = false;
    }
  }
  if (ok && !runs.empty()) {
    try {
      validate_bundle(std::move(runs), dataset, schema);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      ok = false;
    }
  }
  if (!ok) return kExitValidation;
  out << "ok: " << dataset.size() << " samples, " << opts.preds.size() << " prediction file(s)\n";
  return kExitOk;
}

int cmd_stats(const CommonOptions& common, const BundleOptions& opts, std::ostream& out) {
  const auto schema = load_schema(common);
  const auto dataset = load_dataset(opts.dataset, schema);
  const auto dist = label_distribution(dataset.gold, schema);
  const auto manifest = manifest_for(common, input_paths(common, opts), schema, bundle_config(opts));

  print_manifest_banner(out, manifest, "stats");
  print_distribution(out, dist, schema, {opts.full_precision});
  const auto records = distribution_records(dist, schema);
  write_jsonl(opts.jsonl, manifest, records);
  return kExitOk;
}

int cmd_evaluate(const CommonOptions& common, const BundleOptions& opts, bool per_class,
                 std::ostream& out) {
  const auto schema = load_schema(common);
  const auto averages = averages_for(opts.average);
  const auto bundle = load_bundle(opts, schema);
  const auto manifest = manifest_for(common, input_paths(common, opts), schema, bundle_config(opts));
  const Formatting fmt{opts.full_precision};

  std::vector<ModelRow> rows;
  std::vector<Json> records;
  for (const auto& run : bundle.runs) {
    std::vector<LabelId> pred(bundle.dataset.size());
    kernels::omp::argmax_rows(run.predictions.data(), run.predictions.cols(), pred);
    rows.push_back({run.model_id, evaluate(bundle.dataset.gold, pred, schema)});
    records.push_back(eval_record(run.model_id, rows.back().report, schema));
  }

  print_manifest_banner(out, manifest, "evaluate");
  print_model_table(out, rows, averages, fmt);
  if (per_class) {
    for (const auto& row : rows) {
      out << "\n[" << row.model_id << "]\n";
      print_per_class(out, row.report, schema, fmt);
      out << '\n';
      print_confusion(out, row.report.confusion, schema);
    }
  }
  write_jsonl(opts.jsonl, manifest, records);
  return kExitOk;
}

int cmd_ensemble(const CommonOptions& common, const BundleOptions& opts,
                 const std::string& method, const std::string& top_k, const std::string& out_path,
                 std::ostream& out) {
  const auto schema = load_schema(common);
  const auto averages = averages_for(opts.average);
  EnsembleConfig config;
  config.method = parse_method(method);
  config.top_k = parse_top_k(top_k);

  auto bundle = load_bundle(opts, schema);
  override_weights(bundle, opts.weights_from);
  const auto result = run_ensemble(bundle, config, schema);

  auto cfg = bundle_config(opts);
  cfg["method"] = method;
  cfg["top_k"] = config.top_k.to_string();
  cfg["tie_break"] = to_string(config.tie_break);
  if (!out_path.empty()) cfg["out"] = out_path;
  const auto manifest = manifest_for(common, input_paths(common, opts), schema, cfg);

  if (!out_path.empty()) {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot write ensemble output", out_path);
    write_ensemble(file, result.prediction, config, bundle.dataset, schema);
  }

  print_manifest_banner(out, manifest, "ensemble");
  print_ensemble_table(out, {{config, result.report}}, averages, {opts.full_precision});
  write_jsonl(opts.jsonl, manifest,
              {ensemble_record(config, result.prediction, result.report, schema)});
  return kExitOk;
}

int cmd_report(const CommonOptions& common, const BundleOptions& opts,
               const std::vector<std::string>& top_ks, std::ostream& out) {
  const auto schema = load_schema(common);
  const auto averages = averages_for(opts.average);
  std::vector<TopK> grid;
  for (const auto& k : top_ks) grid.push_back(parse_top_k(k));

  auto bundle = load_bundle(opts, schema);
  override_weights(bundle, opts.weights_from);
  const Formatting fmt{opts.full_precision};

  std::vector<ModelRow> model_rows;
  std::vector<Json> records;
  for (const auto& run : bundle.runs) {
    std::vector<LabelId> pred(bundle.dataset.size());
    kernels::omp::argmax_rows(run.predictions.data(), run.predictions.cols(), pred);
    model_rows.push_back({run.model_id, evaluate(bundle.dataset.gold, pred, schema)});
    records.push_back(eval_record(run.model_id, model_rows.back().report, schema));
  }

  std::vector<EnsembleRow> ensemble_rows;
  for (const auto method : {Method::MajorityVoted, Method::Weighted}) {
    for (const auto& k : grid) {
      EnsembleConfig config{method, k, TieBreak::MassThenLowestLabel};
      const auto result = run_ensemble(bundle, config, schema);
      ensemble_rows.push_back({config, result.report});
      records.push_back(ensemble_record(config, result.prediction, result.report, schema));
    }
  }

  auto cfg = bundle_config(opts);
  cfg["top_k"] = top_ks;
  const auto manifest = manifest_for(common, input_paths(common, opts), schema, cfg);
  print_manifest_banner(out, manifest, "report");
  out << "\nBase models\n";
  print_model_table(out, model_rows, averages, fmt);
  out << "\nEnsembles\n";
  print_ensemble_table(out, ensemble_rows, averages, fmt);
  write_jsonl(opts.jsonl, manifest, records);
  return kExitOk;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadConfig, "cannot parse " + what + " '" + text + "'");
    }
  }
  return values;
}

struct SimOptions {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::string priors;
  std::vector<std::string> models;
  std::string out_dir;
  bool exact_accuracy = false;
};

int cmd_simgen(const CommonOptions& common, const SimOptions& opts, std::ostream& out) {
  const auto schema = load_schema(common);
  SimSpec spec;
  spec.n = opts.n;
  spec.seed = opts.seed;
  spec.exact_accuracy = opts.exact_accuracy;
  if (opts.priors.empty()) {
    spec.class_priors.assign(schema.count(), 1.0 / static_cast<double>(schema.count()));
  } else {
    spec.class_priors = parse_reals(opts.priors, "priors");
  }
  for (const auto& text : opts.models) {
    // acc,sharpness[,model_id]
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.size() < 2 || parts.size() > 3) {
      throw Error(ErrorKind::BadConfig, "--model expects acc,sharpness[,id], got '" + text + "'");
    }
    const auto nums = parse_reals(parts[0] + "," + parts[1], "--model");
    spec.models.push_back({parts.size() == 3 ? parts[2] : std::string(), nums[0], nums[1]});
  }

  const auto output = generate(spec, schema);
  const auto written = write_sim_output(output, spec, schema, opts.out_dir);

  Json cfg;
  cfg["seed"] = opts.seed;
  cfg["n"] = opts.n;
  cfg["priors"] = spec.class_priors;
  cfg["models"] = opts.models;
  cfg["exact_accuracy"] = opts.exact_accuracy;
  cfg["generator"] = "mt19937_64";
  std::vector<fs::path> inputs;
  if (!common.schema_path.empty()) inputs.emplace_back(common.schema_path);
  auto manifest = manifest_for(common, inputs, schema, cfg);
  {
    std::ofstream m(fs::path(opts.out_dir) / "manifest.json", std::ios::binary);
    m << manifest.to_json().dump(2) << '\n';
  }

  TextTable table({"Model", "Target", "Realized"});
  for (std::size_t m = 0; m < output.runs.size(); ++m) {
    table.add_row({output.runs[m].model_id, format_score(spec.models[m].accuracy, {}),
                   format_score(output.runs[m].weight, {true})});
  }
  table.print(out);
  for (const auto& path : written) out << "wrote " << path.string() << '\n';
  return kExitOk;
}

void add_bundle_flags(CLI::App* cmd, BundleOptions& opts, bool preds_required) {
  cmd->add_option("--dataset", opts.dataset, "Gold dataset TSV (id, text, label)")->required();
  auto* pred = cmd->add_option("--pred", opts.preds, "Prediction file (repeatable)");
  if (preds_required) pred->required();
}

void add_report_flags(CLI::App* cmd, BundleOptions& opts) {
  cmd->add_option("--average", opts.average, "micro|macro|weighted|all")
      ->check(CLI::IsMember({"micro", "macro", "weighted", "all"}));
  cmd->add_flag("--full-precision", opts.full_precision, "Print scores unrounded");
  cmd->add_option("--jsonl", opts.jsonl, "Also write line-delimited JSON records here");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sentivote: prediction ensembling and evaluation for multiclass sentiment"};
  app.set_version_flag("--version", std::string(SENTIVOTE_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  app.add_option("--schema", common.schema_path, "Label schema file, one label per line");
  app.add_option("--timestamp", common.timestamp, "Pin the manifest timestamp (ISO-8601)");

  BundleOptions bundle_opts;
  bool per_class = false;
  std::string method = "majority";
  std::string top_k = "all";
  std::string out_path;
  std::vector<std::string> grid{"3", "5", "all"};
  SimOptions sim;

  auto* validate = app.add_subcommand("validate", "Check a dataset and prediction files");
  add_bundle_flags(validate, bundle_opts, false);

  auto* stats = app.add_subcommand("stats", "Label distribution of a dataset");
  stats->add_option("--dataset", bundle_opts.dataset, "Gold dataset TSV")->required();
  stats->add_flag("--full-precision", bundle_opts.full_precision, "Print fractions unrounded");
  stats->add_option("--jsonl", bundle_opts.jsonl, "Also write line-delimited JSON records here");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score each prediction file");
  add_bundle_flags(evaluate_cmd, bundle_opts, true);
  add_report_flags(evaluate_cmd, bundle_opts);
  evaluate_cmd->add_flag("--per-class", per_class, "Add per-class scores and confusion matrices");

  auto* ensemble = app.add_subcommand("ensemble", "Combine prediction files and score the result");
  add_bundle_flags(ensemble, bundle_opts, true);
  add_report_flags(ensemble, bundle_opts);
  ensemble->add_option("--method", method, "majority|weighted")
      ->check(CLI::IsMember({"majority", "weighted"}));
  ensemble->add_option("--top-k", top_k, "Number of highest-weight models, or 'all'");
  ensemble->add_option("--out", out_path, "Write the ensemble prediction file here");
  ensemble->add_option("--weights-from", bundle_opts.weights_from,
                       "Take model weights from the accuracies in an evaluate --jsonl report");

  auto* report = app.add_subcommand("report", "Per-model table plus the method x top-k grid");
  add_bundle_flags(report, bundle_opts, true);
  add_report_flags(report, bundle_opts);
  report->add_option("--top-k", grid, "Grid of top-k values (repeatable)")->delimiter(',');
  report->add_option("--weights-from", bundle_opts.weights_from,
                     "Take model weights from the accuracies in an evaluate --jsonl report");

  auto* simgen = app.add_subcommand("simgen", "Generate a synthetic dataset and model predictions");
  simgen->add_option("--seed", sim.seed, "Generator seed")->required();
  simgen->add_option("--n", sim.n, "Number of samples")->required();
  simgen->add_option("--priors", sim.priors, "Comma-separated class priors in schema order");
  simgen->add_option("--model", sim.models, "acc,sharpness[,id] (repeatable)")->required();
  simgen->add_option("--out-dir", sim.out_dir, "Output directory")->required();
  simgen->add_flag("--exact-accuracy", sim.exact_accuracy,
                   "Hit round(acc*n) correct samples exactly");

  std::vector<std::string> argv_store{"sentivote"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  common.command_line = argv_store;
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(common, bundle_opts, out, err);
    if (*stats) return cmd_stats(common, bundle_opts, out);
    if (*evaluate_cmd) return cmd_evaluate(common, bundle_opts, per_class, out);
    if (*ensemble) return cmd_ensemble(common, bundle_opts, method, top_k, out_path, out);
    if (*report) return cmd_report(common, bundle_opts, grid, out);
    if (*simgen) return cmd_simgen(common, sim, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::BadConfig ? kExitUsage : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace sentivote
