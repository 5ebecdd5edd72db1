#include "sentivote/simgen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "sentivote/errors.hpp"

namespace sentivote {

namespace {

void check_spec(const SimSpec& spec, const LabelSchema& schema) {
  if (spec.n == 0) throw Error(ErrorKind::BadSpec, "n must be positive");
  if (spec.class_priors.size() != schema.count()) {
    throw Error(ErrorKind::BadSpec, "need one prior per schema label");
  }
  double sum = 0.0;
  for (const double p : spec.class_priors) {
    if (!std::isfinite(p) || p < 0.0) throw Error(ErrorKind::BadSpec, "priors must be >= 0");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw Error(ErrorKind::BadSpec, "priors must sum to 1");
  if (spec.models.empty()) throw Error(ErrorKind::BadSpec, "at least one model is required");
  for (const auto& model : spec.models) {
    if (!(model.accuracy >= 0.0 && model.accuracy <= 1.0)) {
      throw Error(ErrorKind::BadSpec, "accuracy must lie in [0, 1]");
    }
    if (!(model.sharpness >= 1.0) || !std::isfinite(model.sharpness)) {
      throw Error(ErrorKind::BadSpec, "sharpness must be a finite value >= 1");
    }
    if (model.model_id.find_first_of("/\\") != std::string::npos) {
      throw Error(ErrorKind::BadSpec, "model id '" + model.model_id + "' is not a file name");
    }
  }
}

std::string default_model_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sim-%02zu", index);
  return buf;
}

LabelId draw_class(SimRng& rng, const std::vector<double>& cumulative) {
  const double u = rng.uniform();
  for (std::size_t k = 0; k + 1 < cumulative.size(); ++k) {
    if (u < cumulative[k]) return LabelId(static_cast<std::uint32_t>(k));
  }
  // Last class with nonzero prior absorbs rounding at the top of [0, 1).
  std::size_t k = cumulative.size() - 1;
  while (k > 0 && cumulative[k] == cumulative[k - 1]) --k;
  return LabelId(static_cast<std::uint32_t>(k));
}

}  // namespace

// Draw order, which fixes the output for a seed:
//   1. one uniform per sample for its gold class (inverse CDF over priors);
//   2. per model, in spec order:
//        exact mode: a Fisher-Yates shuffle of sample indices, the first
//        round(accuracy * n) of which are predicted correctly;
//        per sample: [coin if not exact] [wrong-class draw if wrong]
//        then c-1 noise uniforms for the non-predicted classes.
SimOutput generate(const SimSpec& spec, const LabelSchema& schema) {
  check_spec(spec, schema);
  const std::size_t n = spec.n;
  const std::size_t c = schema.count();
  SimRng rng(spec.seed);

  std::vector<double> cumulative(c);
  std::partial_sum(spec.class_priors.begin(), spec.class_priors.end(), cumulative.begin());

  SimOutput out;
  out.dataset.ids.reserve(n);
  out.dataset.texts.reserve(n);
  out.dataset.gold.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.dataset.ids.push_back(std::to_string(i + 1));
    out.dataset.texts.push_back("synthetic sample " + std::to_string(i + 1));
    out.dataset.gold.push_back(draw_class(rng, cumulative));
  }

  std::unordered_set<std::string> ids;
  for (std::size_t m = 0; m < spec.models.size(); ++m) {
    const auto& model = spec.models[m];
    ModelRun run;
    run.model_id = model.model_id.empty() ? default_model_id(m) : model.model_id;
    if (!ids.insert(run.model_id).second) {
      throw Error(ErrorKind::BadSpec, "duplicate model id '" + run.model_id + "'");
    }

    std::vector<bool> correct_mask;
    if (spec.exact_accuracy) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
      const auto hits = static_cast<std::size_t>(std::llround(model.accuracy * static_cast<double>(n)));
      correct_mask.assign(n, false);
      for (std::size_t i = 0; i < hits; ++i) correct_mask[order[i]] = true;
    }

    run.predictions = PredictionMatrix(n, c);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto gold = out.dataset.gold[i].value;
      const bool correct = spec.exact_accuracy ? correct_mask[i] : rng.uniform() < model.accuracy;
      std::uint32_t predicted = gold;
      if (!correct) {
        predicted = static_cast<std::uint32_t>(rng.below(c - 1));
        if (predicted >= gold) ++predicted;
      } else {
        ++hits;
      }

      auto row = run.predictions.row(i);
      double sum = 0.0;
      for (std::size_t k = 0; k < c; ++k) {
        row[k] = (k == predicted) ? 1.0 + model.sharpness : rng.uniform();
        sum += row[k];
      }
      for (double& p : row) p /= sum;
    }
    run.weight = static_cast<double>(hits) / static_cast<double>(n);
    out.runs.push_back(std::move(run));
  }
  return out;
}

std::vector<std::filesystem::path> write_sim_output(const SimOutput& output, const SimSpec& spec,
                                                    const LabelSchema& schema,
                                                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;

  const auto dataset_path = dir / "dataset.tsv";
  {
    std::ofstream out(dataset_path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write", dataset_path.string());
    write_dataset(out, output.dataset, schema);
  }
  written.push_back(dataset_path);

  for (std::size_t m = 0; m < output.runs.size(); ++m) {
    const auto& run = output.runs[m];
    nlohmann::ordered_json extra;
    extra["generator"] = "mt19937_64";
    extra["seed"] = spec.seed;
    extra["target_accuracy"] = spec.models[m].accuracy;
    extra["sharpness"] = spec.models[m].sharpness;
    extra["exact_accuracy"] = spec.exact_accuracy;

    const auto path = dir / (run.model_id + ".jsonl");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write", path.string());
    write_predictions(out, run, output.dataset, schema, extra);
    written.push_back(path);
  }
  return written;
}

}  // namespace sentivote
