#include <omp.h>

#include <cstdint>

#include "sentivote/kernels.hpp"

namespace sentivote::kernels::omp {

namespace {
// Below this many samples a parallel region costs more than it saves.
constexpr std::int64_t kGrain = 2048;
}  // namespace

void argmax_rows(std::span<const double> probs, std::size_t c, std::span<LabelId> out) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static) if (n >= kGrain)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = LabelId(row_argmax(probs.subspan(static_cast<std::size_t>(i) * c, c)));
  }
}

void vote(std::span<const RunView> runs, std::size_t n, std::size_t c, VoteRule rule,
          VoteBuffers out) {
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (rows >= kGrain)
  for (std::int64_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double* scores = out.scores.data() + i * c;
    double* mass = out.mass.data() + i * c;
    for (std::size_t k = 0; k < c; ++k) {
      scores[k] = 0.0;
      mass[k] = 0.0;
    }
    for (const auto& run : runs) {
      const double* row = run.probs.data() + i * c;
      if (rule == VoteRule::Hard) {
        scores[row_argmax({row, c})] += 1.0;
      } else {
        for (std::size_t k = 0; k < c; ++k) scores[k] += run.weight * row[k];
      }
      for (std::size_t k = 0; k < c; ++k) mass[k] += row[k];
    }
    out.labels[i] = LabelId(pick_label({scores, c}, {mass, c}));
  }
}

std::vector<std::uint64_t> confusion_counts(std::span<const LabelId> gold,
                                            std::span<const LabelId> pred, std::size_t c) {
  std::vector<std::uint64_t> counts(c * c, 0);
  std::uint64_t* cells = counts.data();
  const auto cc = counts.size();
  const auto n = static_cast<std::int64_t>(gold.size());
#pragma omp parallel for schedule(static) reduction(+ : cells[:cc]) if (n >= kGrain)
  for (std::int64_t i = 0; i < n; ++i) {
    ++cells[gold[i].value * c + pred[i].value];
  }
  return counts;
}

std::vector<std::uint64_t> label_counts(std::span<const LabelId> labels, std::size_t c) {
  std::vector<std::uint64_t> counts(c, 0);
  std::uint64_t* cells = counts.data();
  const auto n = static_cast<std::int64_t>(labels.size());
#pragma omp parallel for schedule(static) reduction(+ : cells[:c]) if (n >= kGrain)
  for (std::int64_t i = 0; i < n; ++i) {
    ++cells[labels[i].value];
  }
  return counts;
}

}  // namespace sentivote::kernels::omp
