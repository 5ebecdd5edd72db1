// Acceptance suite. Prints one PASS/FAIL line per criterion with its runtime
// and exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracle/reference_vote.hpp"
#include "sentivote/cli.hpp"
#include "sentivote/ensemble.hpp"
#include "sentivote/errors.hpp"
#include "sentivote/metrics.hpp"
#include "sentivote/simgen.hpp"
#include "support/corpus.hpp"

using namespace sentivote;
namespace fs = std::filesystem;

namespace {

const LabelSchema kSchema = LabelSchema::default_schema();

// Thrown by check() to abort a criterion with a message.
struct Failure {
  std::string message;
};

void check(bool ok, const std::string& message) {
  if (!ok) throw Failure{message};
}

std::vector<int> as_ints(const std::vector<LabelId>& labels) {
  std::vector<int> out;
  for (auto l : labels) out.push_back(static_cast<int>(l.value));
  return out;
}

std::vector<nlohmann::json> read_jsonl(const fs::path& p) {
  std::ifstream in(p);
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

int run_tool(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (code != kExitOk) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sentivote_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// --- metric identity -------------------------------------------------------

std::string metric_identity() {
  std::mt19937_64 rng(20240101);
  int trials = 0;
  for (; trials < 1000; ++trials) {
    const std::size_t n = 1 + rng() % 500;
    std::vector<LabelId> gold(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = LabelId(static_cast<std::uint32_t>((rng() % 9) / 3 == 2 ? rng() % 3 : rng() % 2));
      pred[i] = rng() % 3 == 0 ? gold[i] : LabelId(static_cast<std::uint32_t>(rng() % 3));
    }
    const auto r = evaluate(gold, pred, kSchema);
    check(r.micro.precision == r.accuracy && r.micro.recall == r.accuracy &&
              r.micro.f1 == r.accuracy,
          "micro scores differ from accuracy at trial " + std::to_string(trials));
    check(std::abs(r.weighted.recall - r.accuracy) <= 1e-12,
          "weighted recall differs from accuracy at trial " + std::to_string(trials));
  }
  return std::to_string(trials) + " pairs";
}

// --- oracle equivalence ----------------------------------------------------

std::string oracle_equivalence() {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    // alternate exact grid bundles (many ties) and continuous ones
    if (trial % 2 == 0) {
      const auto grid = oracle::random_grid_bundle(rng, 5, 200, 3);
      const auto runs = oracle::to_model_runs(grid);
      check(as_ints(majority_vote(runs).labels) == oracle::exact_majority(grid),
            "majority differs on grid bundle " + std::to_string(trial));
      check(as_ints(weighted_vote(runs).labels) == oracle::exact_weighted(grid),
            "weighted differs on grid bundle " + std::to_string(trial));
    } else {
      const auto runs = oracle::random_bundle(rng, 5, 200, 3);
      const auto ref = oracle::from_model_runs(runs);
      check(as_ints(majority_vote(runs).labels) == oracle::majority(ref).labels,
            "majority differs on bundle " + std::to_string(trial));
      const auto wtd = weighted_vote(runs);
      const auto ref_wtd = oracle::weighted(ref);
      check(as_ints(wtd.labels) == ref_wtd.labels,
            "weighted differs on bundle " + std::to_string(trial));
      for (std::size_t i = 0; i < wtd.labels.size(); ++i) {
        const auto row = wtd.scores.row(i);
        check(std::vector<double>(row.begin(), row.end()) == ref_wtd.scores[i],
              "weighted scores differ on bundle " + std::to_string(trial));
      }
    }
  }

  // Every one-hot bundle of 3 models x 4 samples x 3 classes, under several
  // weight vectors (in 64ths so the exact reference applies).
  const std::vector<std::vector<std::int64_t>> weight_sets{
      {16, 16, 16}, {48, 32, 16}, {16, 32, 48}, {32, 16, 16}, {0, 0, 64}, {64, 0, 0}};
  std::size_t bundles = 0;
  std::size_t combos = 1;
  for (int j = 0; j < 12; ++j) combos *= 3;
  for (std::size_t code = 0; code < combos; ++code) {
    oracle::GridBundle grid;
    grid.prob_den = 1;
    grid.weight_den = 64;
    std::size_t rest = code;
    for (int m = 0; m < 3; ++m) {
      oracle::GridRun run;
      // ids sort in reverse of input position
      run.id = "one-hot-" + std::to_string(2 - m);
      for (int i = 0; i < 4; ++i) {
        std::vector<std::int64_t> row(3, 0);
        row[rest % 3] = 1;
        rest /= 3;
        run.rows.push_back(row);
      }
      grid.runs.push_back(run);
    }
    const auto maj_ref = oracle::exact_majority(grid);
    check(as_ints(majority_vote(oracle::to_model_runs(grid)).labels) == maj_ref,
          "one-hot majority differs at " + std::to_string(code));
    for (const auto& w : weight_sets) {
      for (int m = 0; m < 3; ++m) grid.runs[m].weight_num = w[m];
      check(as_ints(weighted_vote(oracle::to_model_runs(grid)).labels) ==
                oracle::exact_weighted(grid),
            "one-hot weighted differs at " + std::to_string(code));
      ++bundles;
    }
  }
  return "200 random + " + std::to_string(combos) + " one-hot bundles (" + std::to_string(bundles) + " weighted)";
}

// --- hand fixture ----------------------------------------------------------

std::string hand_fixture() {
  PredictionMatrix a(1, 3), b(1, 3);
  const double ra[] = {0.5, 0.3, 0.2};
  const double rb[] = {0.2, 0.6, 0.2};
  std::copy(ra, ra + 3, a.row(0).begin());
  std::copy(rb, rb + 3, b.row(0).begin());
  const std::vector<ModelRun> runs{{"first", a, 0.6}, {"second", b, 0.4}};
  const auto out = weighted_vote(runs);
  const auto s = out.scores.row(0);
  check(s[0] == 0.38 && s[1] == 0.42 && s[2] == 0.20, "scores are not (0.38, 0.42, 0.20)");
  check(out.labels[0].value == 1, "label is not 1");
  return "scores (0.38, 0.42, 0.20), label 1";
}

// --- invariance ------------------------------------------------------------

std::string invariance() {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string at = " at trial " + std::to_string(trial);

    // weight scale: continuous bundle, labels and scaled scores
    {
      auto runs = oracle::random_bundle(rng, 5, 100, 3);
      const auto base = weighted_vote(runs);
      for (const double lambda : {0.1, 1.0, 10.0}) {
        auto scaled = runs;
        for (auto& r : scaled) r.weight *= lambda;
        check(weighted_vote(scaled).labels == base.labels, "scale invariance fails" + at);
      }
    }

    // model order and duplicate copies on tie-heavy grid bundles
    {
      auto runs = oracle::to_model_runs(oracle::random_grid_bundle(rng, 5, 60, 3));
      const auto maj = majority_vote(runs).labels;
      const auto wtd = weighted_vote(runs).labels;
      std::shuffle(runs.begin(), runs.end(), rng);
      check(majority_vote(runs).labels == maj, "majority depends on run order" + at);
      check(weighted_vote(runs).labels == wtd, "weighted depends on run order" + at);

      const auto& single = runs.front();
      std::vector<LabelId> argmax;
      for (std::size_t i = 0; i < single.predictions.rows(); ++i) {
        const auto row = single.predictions.row(i);
        argmax.push_back(LabelId(static_cast<std::uint32_t>(
            oracle::first_max(std::vector<double>(row.begin(), row.end())))));
      }
      std::vector<ModelRun> copies;
      const int m = 1 + static_cast<int>(rng() % 5);
      for (int j = 0; j < m; ++j) {
        auto copy = single;
        copy.model_id = "copy-" + std::to_string(j);
        copy.weight = 0.25;
        copies.push_back(std::move(copy));
      }
      check(majority_vote(copies).labels == argmax, "majority of copies is not the argmax" + at);
      check(weighted_vote(copies).labels == argmax, "weighted of copies is not the argmax" + at);
    }

    // one-hot rows, equal weights: weighted reduces to majority
    {
      const std::size_t models = 1 + rng() % 7;
      const std::size_t n = 1 + rng() % 60;
      const double w = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
      std::vector<ModelRun> runs;
      for (std::size_t j = 0; j < models; ++j) {
        PredictionMatrix p(n, 3);
        for (std::size_t i = 0; i < n; ++i) p.row(i)[rng() % 3] = 1.0;
        runs.push_back({"h" + std::to_string(rng() % 1000) + "-" + std::to_string(j), p, w});
      }
      check(weighted_vote(runs).labels == majority_vote(runs).labels,
            "weighted differs from majority on one-hot equal weights" + at);
    }
  }
  return "500 trials";
}

// --- replay of the nine-model dev-test shape -------------------------------

std::string replay() {
  const std::vector<double> targets{0.550, 0.701, 0.672, 0.639, 0.669,
                                    0.657, 0.693, 0.701, 0.684};
  const std::size_t n = 3427;
  const auto dir = scratch_dir("replay");
  std::vector<std::string> args{"--timestamp", "2024-01-01T00:00:00Z", "simgen", "--seed", "3427",
                                "--n", std::to_string(n), "--priors", "0.4375,0.1875,0.375",
                                "--exact-accuracy", "--out-dir", (dir / "sim").string()};
  std::vector<std::string> ids;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f,3,model-%zu", targets[j], j + 1);
    args.push_back("--model");
    args.push_back(buf);
    ids.push_back("model-" + std::to_string(j + 1));
  }
  check(run_tool(args) == kExitOk, "simgen failed");

  const auto dataset = load_dataset(dir / "sim" / "dataset.tsv", kSchema);
  check(dataset.size() == n, "dataset size");
  std::vector<ModelRun> runs;
  std::vector<std::string> pred_args;
  double worst = 0.0;
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const auto path = dir / "sim" / (ids[j] + ".jsonl");
    runs.push_back(load_predictions(path, dataset, kSchema));
    worst = std::max(worst, std::abs(runs.back().weight - targets[j]));
    pred_args.push_back("--pred");
    pred_args.push_back(path.string());
  }
  check(worst <= 0.005, "realized accuracy off target by " + std::to_string(worst));

  std::vector<std::string> eval_args{"evaluate", "--dataset", (dir / "sim" / "dataset.tsv").string()};
  eval_args.insert(eval_args.end(), pred_args.begin(), pred_args.end());
  eval_args.push_back("--jsonl");
  eval_args.push_back((dir / "eval.jsonl").string());
  check(run_tool(eval_args) == kExitOk, "evaluate failed");
  std::map<std::string, double> reported;
  for (const auto& rec : read_jsonl(dir / "eval.jsonl")) {
    if (rec["type"] == "eval") reported[rec["model_id"]] = rec["accuracy"].get<double>();
  }
  check(reported.size() == runs.size(), "evaluate did not report every model");
  for (const auto& run : runs) {
    check(std::abs(reported[run.model_id] - run.weight) <= 1e-12,
          "evaluate accuracy differs from realized for " + run.model_id);
  }

  std::vector<std::string> report_args{"report", "--dataset", (dir / "sim" / "dataset.tsv").string()};
  report_args.insert(report_args.end(), pred_args.begin(), pred_args.end());
  report_args.push_back("--jsonl");
  report_args.push_back((dir / "report.jsonl").string());
  check(run_tool(report_args) == kExitOk, "report failed");

  // Oracle side: its own ranking, its own vote.
  auto ref_runs = oracle::from_model_runs(runs);
  std::sort(ref_runs.begin(), ref_runs.end(), [](const auto& a, const auto& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.id < b.id;
  });
  std::size_t rows = 0;
  for (const auto& rec : read_jsonl(dir / "report.jsonl")) {
    if (rec["type"] != "ensemble") continue;
    ++rows;
    const std::string top = rec["top_k"];
    const std::size_t k = top == "all" ? ref_runs.size() : std::stoul(top);
    const std::vector<oracle::Run> chosen(ref_runs.begin(), ref_runs.begin() + k);
    const auto labels = rec["method"] == "majority" ? oracle::majority(chosen).labels
                                                    : oracle::weighted(chosen).labels;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += labels[i] == static_cast<int>(dataset.gold[i].value);
    const double acc = static_cast<double>(hits) / static_cast<double>(n);
    check(rec["accuracy"].get<double>() == acc,
          "ensemble " + rec["method"].get<std::string>() + "/" + top + " differs from oracle");
    std::vector<std::string> names;
    for (const auto& r : chosen) names.push_back(r.id);
    check(rec["models"].get<std::vector<std::string>>() == names,
          "ensemble " + rec["method"].get<std::string>() + "/" + top + " picked other models");
  }
  check(rows == 6, "expected 6 ensemble rows, got " + std::to_string(rows));
  fs::remove_all(dir);
  char buf[96];
  std::snprintf(buf, sizeof buf, "max |realized - target| = %.5f, 6 ensemble rows", worst);
  return buf;
}

// --- ensemble gain ---------------------------------------------------------

std::string ensemble_gain() {
  std::string summary;
  for (const std::uint64_t seed : {11ull, 23ull, 47ull}) {
    SimSpec spec{10000, {1.0 / 3, 1.0 / 3, 1.0 - 2.0 / 3}, {}, seed, false};
    for (int j = 0; j < 5; ++j) spec.models.push_back({"", 0.70, 2.0});
    const auto out = generate(spec, kSchema);
    double best = 0.0;
    for (const auto& run : out.runs) best = std::max(best, run.weight);
    const auto maj = majority_vote(out.runs);
    const double acc = evaluate(out.dataset.gold, maj.labels, kSchema).accuracy;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%sseed %llu: %.4f vs %.4f", summary.empty() ? "" : ", ",
                  static_cast<unsigned long long>(seed), acc, best);
    summary += buf;
    check(acc >= best + 0.05, "no gain at seed " + std::to_string(seed));
  }
  return summary;
}

// --- ingest round-trip -----------------------------------------------------

std::string ingest_round_trip() {
  const auto fixture = corpus::data_dir() / "fixture";
  const auto dataset = load_dataset(fixture / "dataset.tsv", kSchema);
  std::stringstream ds_text;
  write_dataset(ds_text, dataset, kSchema);
  const auto dataset2 = read_dataset(ds_text, kSchema);
  check(dataset2.ids == dataset.ids && dataset2.texts == dataset.texts &&
            dataset2.gold == dataset.gold,
        "dataset round-trip changed content");

  for (const char* name : {"model_a.jsonl", "model_b.jsonl"}) {
    const auto run = load_predictions(fixture / name, dataset, kSchema);
    std::stringstream text;
    write_predictions(text, run, dataset, kSchema);
    const auto run2 = read_predictions(text, dataset2, kSchema);
    check(run2.model_id == run.model_id && run2.weight == run.weight &&
              run2.predictions == run.predictions,
          std::string("prediction round-trip changed ") + name);
  }

  const std::set<std::string> documented{
      "MalformedRow",   "DuplicateId",      "UnknownLabel",   "ExtraSample",    "MissingSample",
      "BadProbability", "WeightOutOfRange", "ShapeMismatch", "DuplicateModelId"};
  std::set<std::string> seen;
  std::size_t files = 0;
  for (const auto& c : corpus::cases()) {
    const auto outcome = corpus::run(c);
    check(outcome.kind.has_value(), c.file + " was accepted");
    const std::string got(to_string(*outcome.kind));
    check(got == c.expected, c.file + " raised " + got + ", expected " + c.expected);
    seen.insert(got);
    ++files;
  }
  for (const auto& kind : documented) check(seen.count(kind) == 1, kind + " never triggered");
  return "2 fixtures, " + std::to_string(files) + " malformed files, " +
         std::to_string(seen.size()) + " error kinds";
}

struct Criterion {
  const char* name;
  double budget_s;  // 0 means no runtime bound
  std::function<std::string()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"metric identity", 5, metric_identity},
      {"oracle equivalence", 30, oracle_equivalence},
      {"weighted vote hand fixture", 0, hand_fixture},
      {"invariance suite", 0, invariance},
      {"nine-model dev-test replay", 60, replay},
      {"ensemble gain", 10, ensemble_gain},
      {"ingest round-trip", 0, ingest_round_trip},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.body();
    } catch (const Failure& f) {
      ok = false;
      detail = f.message;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.budget_s > 0 && secs > c.budget_s) {
      ok = false;
      detail += " (over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget)";
    }
    failures += !ok;
    std::printf("%s  %-28s %7.3fs  %s\n", ok ? "PASS" : "FAIL", c.name, secs, detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
