#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sentivote/ingest.hpp"
#include "sentivote/metrics.hpp"

namespace sentivote {

enum class Method { MajorityVoted, Weighted };

// Only one policy exists: higher aggregate score, then higher unweighted
// probability mass, then lower LabelId. Spelled out so output headers can
// record it.
enum class TieBreak { MassThenLowestLabel };

// Number of top-weighted models to combine; nullopt means all of them.
struct TopK {
  std::optional<std::size_t> k;

  static TopK all() { return {}; }
  static TopK of(std::size_t n) { return {n}; }
  std::string to_string() const;
};

struct EnsembleConfig {
  Method method = Method::MajorityVoted;
  TopK top_k;
  TieBreak tie_break = TieBreak::MassThenLowestLabel;
};

struct EnsemblePrediction {
  std::vector<LabelId> labels;
  PredictionMatrix scores;  // vote counts or weighted probability sums
  std::vector<std::string> contributing_models;  // selection order
};

struct EnsembleResult {
  EnsemblePrediction prediction;
  EvalReport report;
};

std::string_view to_string(Method method);
std::string_view to_string(TieBreak tie_break);
Method parse_method(std::string_view name);  // "majority" | "weighted"
TopK parse_top_k(std::string_view text);     // positive integer | "all"

// Highest weight first, ties by ascending model_id. Throws KTooLarge.
std::vector<ModelRun> rank_models(std::span<const ModelRun> runs, TopK k);

// Both votes sum over runs in ascending model_id order, so the caller's run
// order never affects the result. Throws EmptyBundle / ShapeMismatch.
EnsemblePrediction majority_vote(std::span<const ModelRun> runs,
                                 TieBreak tie_break = TieBreak::MassThenLowestLabel);
// Also throws AllZeroWeights and WeightOutOfRange (negative or non-finite).
EnsemblePrediction weighted_vote(std::span<const ModelRun> runs,
                                 TieBreak tie_break = TieBreak::MassThenLowestLabel);

EnsembleResult run_ensemble(const Bundle& bundle, const EnsembleConfig& config,
                            const LabelSchema& schema);

// Same record layout as a prediction file, `scores` instead of `probs`.
void write_ensemble(std::ostream& out, const EnsemblePrediction& prediction,
                    const EnsembleConfig& config, const GoldDataset& dataset,
                    const LabelSchema& schema);

}  // namespace sentivote
