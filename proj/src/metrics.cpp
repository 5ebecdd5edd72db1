#include "sentivote/metrics.hpp"

#include <numeric>
#include <string>

#include "sentivote/errors.hpp"
#include "sentivote/kernels.hpp"

namespace sentivote {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

Scores scores_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  return {ratio(tp, tp + fp), ratio(tp, tp + fn), ratio(2 * tp, 2 * tp + fp + fn)};
}

void check_labels(std::span<const LabelId> labels, std::size_t classes, const char* what) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].value >= classes) {
      throw Error(ErrorKind::LabelOutOfRange, std::string(what) + "[" + std::to_string(i) +
                                                  "] = " + std::to_string(labels[i].value));
    }
  }
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::size_t classes, std::vector<std::uint64_t> counts)
    : classes_(classes), counts_(std::move(counts)) {
  if (counts_.size() != classes_ * classes_) {
    throw Error(ErrorKind::ShapeMismatch, "confusion counts are not classes x classes");
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t k = 0; k < classes_; ++k) t += at(k, k);
  return t;
}

std::uint64_t ConfusionMatrix::gold_support(std::size_t k) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < classes_; ++p) s += at(k, p);
  return s;
}

std::uint64_t ConfusionMatrix::predicted(std::size_t k) const {
  std::uint64_t s = 0;
  for (std::size_t g = 0; g < classes_; ++g) s += at(g, k);
  return s;
}

const Scores& EvalReport::averaged(Average avg) const {
  switch (avg) {
    case Average::Micro: return micro;
    case Average::Macro: return macro;
    case Average::Weighted: return weighted;
  }
  return micro;
}

ConfusionMatrix confusion(std::span<const LabelId> gold, std::span<const LabelId> pred,
                          std::size_t classes) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(gold.size()) + " gold vs " +
                                               std::to_string(pred.size()) + " predicted");
  }
  check_labels(gold, classes, "gold");
  check_labels(pred, classes, "pred");
  return ConfusionMatrix(classes, kernels::omp::confusion_counts(gold, pred, classes));
}

EvalReport evaluate(std::span<const LabelId> gold, std::span<const LabelId> pred,
                    const LabelSchema& schema) {
  return evaluate(confusion(gold, pred, schema.count()));
}

EvalReport evaluate(const ConfusionMatrix& cm) {
  const std::uint64_t n = cm.total();
  if (n == 0) throw Error(ErrorKind::EmptyInput, "no samples to evaluate");
  const std::size_t c = cm.classes();

  EvalReport report;
  report.confusion = cm;
  const std::uint64_t correct = cm.trace();
  report.accuracy = ratio(correct, n);

  std::uint64_t tp_sum = 0, fp_sum = 0, fn_sum = 0;
  Scores macro_sum, weighted_sum;
  for (std::size_t k = 0; k < c; ++k) {
    const std::uint64_t tp = cm.at(k, k);
    const std::uint64_t fp = cm.predicted(k) - tp;
    const std::uint64_t support = cm.gold_support(k);
    const std::uint64_t fn = support - tp;
    const Scores s = scores_from_counts(tp, fp, fn);
    report.per_class.push_back(s);
    report.support.push_back(support);

    tp_sum += tp;
    fp_sum += fp;
    fn_sum += fn;
    macro_sum.precision += s.precision;
    macro_sum.recall += s.recall;
    macro_sum.f1 += s.f1;
    const auto w = static_cast<double>(support);
    weighted_sum.precision += w * s.precision;
    weighted_sum.recall += w * s.recall;
    weighted_sum.f1 += w * s.f1;
  }

  // tp_sum + fp_sum == tp_sum + fn_sum == n, so micro P/R/F1 reduce to the
  // same integer ratio as accuracy and compare equal exactly.
  report.micro = scores_from_counts(tp_sum, fp_sum, fn_sum);

  const auto classes = static_cast<double>(c);
  report.macro = {macro_sum.precision / classes, macro_sum.recall / classes,
                  macro_sum.f1 / classes};
  const auto total = static_cast<double>(n);
  report.weighted = {weighted_sum.precision / total, weighted_sum.recall / total,
                     weighted_sum.f1 / total};
  return report;
}

LabelDistribution label_distribution(std::span<const LabelId> gold, const LabelSchema& schema) {
  check_labels(gold, schema.count(), "gold");
  LabelDistribution dist;
  dist.counts = kernels::omp::label_counts(gold, schema.count());
  dist.total = gold.size();
  dist.fractions.reserve(dist.counts.size());
  for (const auto count : dist.counts) dist.fractions.push_back(ratio(count, dist.total));
  return dist;
}

}  // namespace sentivote
