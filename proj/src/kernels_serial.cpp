#include <algorithm>

#include "sentivote/kernels.hpp"

namespace sentivote::kernels::serial {

void argmax_rows(std::span<const double> probs, std::size_t c, std::span<LabelId> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = LabelId(row_argmax(probs.subspan(i * c, c)));
  }
}

// Run-major accumulation: each score cell still sees the runs in order.
void vote(std::span<const RunView> runs, std::size_t n, std::size_t c, VoteRule rule,
          VoteBuffers out) {
  std::fill(out.scores.begin(), out.scores.end(), 0.0);
  std::fill(out.mass.begin(), out.mass.end(), 0.0);

  for (const auto& run : runs) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = run.probs.subspan(i * c, c);
      double* scores = out.scores.data() + i * c;
      double* mass = out.mass.data() + i * c;
      if (rule == VoteRule::Hard) {
        scores[row_argmax(row)] += 1.0;
      } else {
        for (std::size_t k = 0; k < c; ++k) scores[k] += run.weight * row[k];
      }
      for (std::size_t k = 0; k < c; ++k) mass[k] += row[k];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    out.labels[i] = LabelId(pick_label(out.scores.subspan(i * c, c), out.mass.subspan(i * c, c)));
  }
}

std::vector<std::uint64_t> confusion_counts(std::span<const LabelId> gold,
                                            std::span<const LabelId> pred, std::size_t c) {
  std::vector<std::uint64_t> counts(c * c, 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++counts[gold[i].value * c + pred[i].value];
  }
  return counts;
}

std::vector<std::uint64_t> label_counts(std::span<const LabelId> labels, std::size_t c) {
  std::vector<std::uint64_t> counts(c, 0);
  for (const auto label : labels) ++counts[label.value];
  return counts;
}

}  // namespace sentivote::kernels::serial
