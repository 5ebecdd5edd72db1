#pragma once

// Data-parallel inner loops of the toolkit. Every kernel exists twice: an
// OpenMP version used by the library and a plain serial version kept as the
// reference for tests and benchmarks. Both must agree bit for bit; each sample
// is reduced over runs in the caller's run order in both versions.

#include <cstdint>
#include <span>
#include <vector>

#include "sentivote/schema.hpp"

namespace sentivote::kernels {

// Borrowed view of one model: n*c row-major probabilities plus its weight.
struct RunView {
  std::span<const double> probs;
  double weight = 1.0;
};

enum class VoteRule {
  Hard,  // one vote per model for its row argmax
  Soft,  // weight * probability row
};

// Outputs are caller-allocated: scores and mass are n*c, labels is n.
// mass[i][k] is the unweighted probability mass of class k summed over runs,
// used only to break ties in scores. Remaining ties go to the lowest LabelId.
struct VoteBuffers {
  std::span<double> scores;
  std::span<double> mass;
  std::span<LabelId> labels;
};

// Lowest index wins among equal maxima.
inline std::uint32_t row_argmax(std::span<const double> row) {
  std::uint32_t best = 0;
  for (std::uint32_t k = 1; k < row.size(); ++k) {
    if (row[k] > row[best]) best = k;
  }
  return best;
}

// Score first, then mass, then lowest index.
inline std::uint32_t pick_label(std::span<const double> scores, std::span<const double> mass) {
  std::uint32_t best = 0;
  for (std::uint32_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best] || (scores[k] == scores[best] && mass[k] > mass[best])) {
      best = k;
    }
  }
  return best;
}

namespace omp {

void argmax_rows(std::span<const double> probs, std::size_t c, std::span<LabelId> out);
void vote(std::span<const RunView> runs, std::size_t n, std::size_t c, VoteRule rule,
          VoteBuffers out);
std::vector<std::uint64_t> confusion_counts(std::span<const LabelId> gold,
                                            std::span<const LabelId> pred, std::size_t c);
std::vector<std::uint64_t> label_counts(std::span<const LabelId> labels, std::size_t c);

}  // namespace omp

namespace serial {

void argmax_rows(std::span<const double> probs, std::size_t c, std::span<LabelId> out);
void vote(std::span<const RunView> runs, std::size_t n, std::size_t c, VoteRule rule,
          VoteBuffers out);
std::vector<std::uint64_t> confusion_counts(std::span<const LabelId> gold,
                                            std::span<const LabelId> pred, std::size_t c);
std::vector<std::uint64_t> label_counts(std::span<const LabelId> labels, std::size_t c);

}  // namespace serial

}  // namespace sentivote::kernels
