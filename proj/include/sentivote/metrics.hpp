#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sentivote/schema.hpp"

namespace sentivote {

// counts(g, p) = samples with gold class g predicted as p.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  ConfusionMatrix(std::size_t classes, std::vector<std::uint64_t> counts);

  std::size_t classes() const noexcept { return classes_; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t at(std::size_t gold, std::size_t pred) const {
    return counts_[gold * classes_ + pred];
  }
  std::uint64_t trace() const;
  std::uint64_t gold_support(std::size_t k) const;
  std::uint64_t predicted(std::size_t k) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t classes_ = 0;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> counts_;
};

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class Average { Micro, Macro, Weighted };

struct EvalReport {
  double accuracy = 0.0;
  std::vector<Scores> per_class;
  std::vector<std::uint64_t> support;
  Scores micro;
  Scores macro;
  Scores weighted;
  ConfusionMatrix confusion;

  const Scores& averaged(Average avg) const;
};

// Throws LengthMismatch or LabelOutOfRange.
ConfusionMatrix confusion(std::span<const LabelId> gold, std::span<const LabelId> pred,
                          std::size_t classes);

// P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2TP/(2TP+FP+FN); any 0/0 score is 0.
// Macro averages over every schema class, including classes absent from both
// gold and predictions. Throws EmptyInput when there are no samples.
EvalReport evaluate(std::span<const LabelId> gold, std::span<const LabelId> pred,
                    const LabelSchema& schema);
EvalReport evaluate(const ConfusionMatrix& confusion);

struct LabelDistribution {
  std::vector<std::uint64_t> counts;
  std::vector<double> fractions;
  std::uint64_t total = 0;
};

LabelDistribution label_distribution(std::span<const LabelId> gold, const LabelSchema& schema);

}  // namespace sentivote
