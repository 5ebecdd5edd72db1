#include "sentivote/ensemble.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "sentivote/errors.hpp"
#include "sentivote/kernels.hpp"

namespace sentivote {

namespace {

std::vector<const ModelRun*> canonical_order(std::span<const ModelRun> runs) {
  if (runs.empty()) throw Error(ErrorKind::EmptyBundle, "no runs to ensemble");
  std::vector<const ModelRun*> ordered;
  ordered.reserve(runs.size());
  for (const auto& run : runs) ordered.push_back(&run);
  std::sort(ordered.begin(), ordered.end(),
            [](const ModelRun* a, const ModelRun* b) { return a->model_id < b->model_id; });

  const auto rows = ordered.front()->predictions.rows();
  const auto cols = ordered.front()->predictions.cols();
  if (cols == 0) throw Error(ErrorKind::ShapeMismatch, "predictions have no classes");
  for (const auto* run : ordered) {
    if (run->predictions.rows() != rows || run->predictions.cols() != cols) {
      throw Error(ErrorKind::ShapeMismatch, run->model_id + " differs in shape");
    }
  }
  return ordered;
}

EnsemblePrediction vote(std::span<const ModelRun> runs, kernels::VoteRule rule) {
  const auto ordered = canonical_order(runs);
  const auto n = ordered.front()->predictions.rows();
  const auto c = ordered.front()->predictions.cols();

  std::vector<kernels::RunView> views;
  views.reserve(ordered.size());
  for (const auto* run : ordered) views.push_back({run->predictions.data(), run->weight});

  EnsemblePrediction out;
  out.labels.resize(n);
  std::vector<double> scores(n * c), mass(n * c);
  kernels::omp::vote(views, n, c, rule, {scores, mass, out.labels});
  out.scores = PredictionMatrix(n, c, std::move(scores));
  for (const auto& run : runs) out.contributing_models.push_back(run.model_id);
  return out;
}

}  // namespace

std::string TopK::to_string() const { return k ? std::to_string(*k) : std::string("all"); }

std::string_view to_string(Method method) {
  return method == Method::MajorityVoted ? "majority" : "weighted";
}

std::string_view to_string(TieBreak) { return "mass-then-lowest-label"; }

Method parse_method(std::string_view name) {
  if (name == "majority") return Method::MajorityVoted;
  if (name == "weighted") return Method::Weighted;
  throw Error(ErrorKind::BadConfig, "unknown method '" + std::string(name) + "'");
}

TopK parse_top_k(std::string_view text) {
  if (text == "all" || text == "All") return TopK::all();
  std::size_t k = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc() || end != text.data() + text.size() || k == 0) {
    throw Error(ErrorKind::BadConfig, "top-k must be a positive integer or 'all'");
  }
  return TopK::of(k);
}

std::vector<ModelRun> rank_models(std::span<const ModelRun> runs, TopK k) {
  const std::size_t take = k.k.value_or(runs.size());
  if (take == 0) throw Error(ErrorKind::BadConfig, "top-k must be at least 1");
  if (take > runs.size()) {
    throw Error(ErrorKind::KTooLarge, "top-" + std::to_string(take) + " of " +
                                          std::to_string(runs.size()) + " models");
  }
  std::vector<const ModelRun*> order;
  for (const auto& run : runs) order.push_back(&run);
  std::sort(order.begin(), order.end(), [](const ModelRun* a, const ModelRun* b) {
    if (a->weight != b->weight) return a->weight > b->weight;
    return a->model_id < b->model_id;
  });
  std::vector<ModelRun> selected;
  selected.reserve(take);
  for (std::size_t i = 0; i < take; ++i) selected.push_back(*order[i]);
  return selected;
}

EnsemblePrediction majority_vote(std::span<const ModelRun> runs, TieBreak) {
  return vote(runs, kernels::VoteRule::Hard);
}

EnsemblePrediction weighted_vote(std::span<const ModelRun> runs, TieBreak) {
  if (runs.empty()) throw Error(ErrorKind::EmptyBundle, "no runs to ensemble");
  double total = 0.0;
  for (const auto& run : runs) {
    if (!std::isfinite(run.weight) || run.weight < 0.0) {
      throw Error(ErrorKind::WeightOutOfRange, run.model_id);
    }
    total += run.weight;
  }
  if (!(total > 0.0)) throw Error(ErrorKind::AllZeroWeights, "sum of weights is zero");
  return vote(runs, kernels::VoteRule::Soft);
}

EnsembleResult run_ensemble(const Bundle& bundle, const EnsembleConfig& config,
                            const LabelSchema& schema) {
  const auto selected = rank_models(bundle.runs, config.top_k);
  EnsembleResult result;
  result.prediction = config.method == Method::MajorityVoted
                          ? majority_vote(selected, config.tie_break)
                          : weighted_vote(selected, config.tie_break);
  result.report = evaluate(bundle.dataset.gold, result.prediction.labels, schema);
  return result;
}

void write_ensemble(std::ostream& out, const EnsemblePrediction& prediction,
                    const EnsembleConfig& config, const GoldDataset& dataset,
                    const LabelSchema& schema) {
  if (prediction.labels.size() != dataset.size()) {
    throw Error(ErrorKind::ShapeMismatch, "ensemble output does not match dataset");
  }
  nlohmann::ordered_json header;
  header["model_id"] = "ensemble-" + std::string(to_string(config.method)) + "-top-" +
                       config.top_k.to_string();
  header["kind"] = "ensemble";
  header["method"] = to_string(config.method);
  header["top_k"] = config.top_k.to_string();
  header["tie_break"] = to_string(config.tie_break);
  header["models"] = prediction.contributing_models;
  header["labels"] = std::vector<std::string>(schema.labels().begin(), schema.labels().end());
  out << header.dump() << '\n';

  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto row = prediction.scores.row(i);
    nlohmann::ordered_json record;
    record["id"] = dataset.ids[i];
    record["scores"] = std::vector<double>(row.begin(), row.end());
    record["label"] = schema.name(prediction.labels[i]);
    out << record.dump() << '\n';
  }
}

}  // namespace sentivote
