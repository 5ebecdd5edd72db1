#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "sentivote/errors.hpp"
#include "sentivote/metrics.hpp"

using namespace sentivote;

namespace {

const LabelSchema kSchema = LabelSchema::default_schema();

std::vector<LabelId> ids(std::initializer_list<int> v) {
  std::vector<LabelId> out;
  for (int x : v) out.push_back(LabelId(static_cast<std::uint32_t>(x)));
  return out;
}

std::pair<std::vector<LabelId>, std::vector<LabelId>> random_pair(std::mt19937_64& rng,
                                                                  std::size_t max_n,
                                                                  std::size_t c) {
  const std::size_t n = 1 + rng() % max_n;
  std::vector<LabelId> gold(n), pred(n);
  // skewed draws so some classes are rare or absent
  for (std::size_t i = 0; i < n; ++i) {
    gold[i] = LabelId(static_cast<std::uint32_t>((rng() % (c * c)) / c));
    pred[i] = rng() % 3 == 0 ? gold[i] : LabelId(static_cast<std::uint32_t>(rng() % c));
  }
  return {gold, pred};
}

}  // namespace

TEST(ConfusionTest, PerfectPredictionIsDiagonal) {
  const auto g = ids({0, 1, 2, 2, 1});
  const auto cm = confusion(g, g, 3);
  EXPECT_EQ(cm.total(), 5u);
  EXPECT_EQ(cm.trace(), 5u);
  EXPECT_EQ(cm.at(1, 1), 2u);
  EXPECT_EQ(cm.at(2, 2), 2u);
}

TEST(ConfusionTest, HandTally) {
  const auto cm = confusion(ids({0, 0, 1, 2}), ids({0, 1, 1, 1}), 3);
  for (std::size_t g = 0; g < 3; ++g) {
    for (std::size_t p = 0; p < 3; ++p) {
      const bool expected_one = (g == 0 && p == 0) || (g == 0 && p == 1) ||
                                (g == 1 && p == 1) || (g == 2 && p == 1);
      EXPECT_EQ(cm.at(g, p), expected_one ? 1u : 0u) << g << "," << p;
    }
  }
}

TEST(ConfusionTest, EmptyAndErrors) {
  const auto cm = confusion({}, {}, 3);
  EXPECT_EQ(cm.total(), 0u);
  EXPECT_EQ(cm.trace(), 0u);
  EXPECT_THROW(confusion(ids({0}), ids({0, 1}), 3), Error);
  try {
    confusion(ids({0, 3}), ids({0, 1}), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LabelOutOfRange);
  }
  try {
    confusion(ids({0}), ids({0, 1}), 3);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
}

TEST(EvaluateTest, PerfectPrediction) {
  const auto g = ids({0, 1, 2, 0});
  const auto r = evaluate(g, g, kSchema);
  EXPECT_EQ(r.accuracy, 1.0);
  for (const auto avg : {Average::Micro, Average::Macro, Average::Weighted}) {
    EXPECT_EQ(r.averaged(avg).precision, 1.0);
    EXPECT_EQ(r.averaged(avg).recall, 1.0);
    EXPECT_EQ(r.averaged(avg).f1, 1.0);
  }
}

// Expected values come from the hand tally above, reduced with exact fractions.
TEST(EvaluateTest, HandTallyScores) {
  const auto r = evaluate(ids({0, 0, 1, 2}), ids({0, 1, 1, 1}), kSchema);
  EXPECT_EQ(r.accuracy, 0.5);
  EXPECT_EQ(r.per_class[0].precision, 1.0);
  EXPECT_EQ(r.per_class[0].recall, 0.5);
  EXPECT_DOUBLE_EQ(r.per_class[0].f1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].precision, 1.0 / 3.0);
  EXPECT_EQ(r.per_class[1].recall, 1.0);
  EXPECT_EQ(r.per_class[1].f1, 0.5);
  EXPECT_EQ(r.per_class[2].precision, 0.0);  // never predicted: 0/0 -> 0
  EXPECT_EQ(r.per_class[2].recall, 0.0);
  EXPECT_EQ(r.per_class[2].f1, 0.0);

  EXPECT_DOUBLE_EQ(r.macro.precision, 4.0 / 9.0);
  EXPECT_DOUBLE_EQ(r.macro.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.macro.f1, 7.0 / 18.0);
  EXPECT_DOUBLE_EQ(r.weighted.precision, 7.0 / 12.0);
  EXPECT_DOUBLE_EQ(r.weighted.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.weighted.f1, 11.0 / 24.0);
  EXPECT_EQ(r.support, (std::vector<std::uint64_t>{2, 1, 1}));
}

TEST(EvaluateTest, EmptyInputThrows) {
  try {
    evaluate({}, {}, kSchema);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyInput);
  }
}

TEST(EvaluateTest, MicroIdentityAndWeightedRecall) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [gold, pred] = random_pair(rng, 500, 3);
    const auto r = evaluate(gold, pred, kSchema);
    ASSERT_EQ(r.micro.precision, r.accuracy);
    ASSERT_EQ(r.micro.recall, r.accuracy);
    ASSERT_EQ(r.micro.f1, r.accuracy);
    ASSERT_NEAR(r.weighted.recall, r.accuracy, 1e-12);
    ASSERT_EQ(r.confusion.total(), gold.size());
    for (const auto avg : {Average::Micro, Average::Macro, Average::Weighted}) {
      const auto& s = r.averaged(avg);
      for (double v : {s.precision, s.recall, s.f1}) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0 + 1e-15);
      }
    }
  }
}

TEST(EvaluateTest, JointSamplePermutationChangesNothing) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    auto [gold, pred] = random_pair(rng, 200, 3);
    const auto before = evaluate(gold, pred, kSchema);
    std::vector<std::size_t> order(gold.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<LabelId> g2, p2;
    for (auto i : order) {
      g2.push_back(gold[i]);
      p2.push_back(pred[i]);
    }
    const auto after = evaluate(g2, p2, kSchema);
    ASSERT_EQ(after.accuracy, before.accuracy);
    ASSERT_EQ(after.confusion, before.confusion);
    ASSERT_EQ(after.macro.f1, before.macro.f1);
    ASSERT_EQ(after.weighted.precision, before.weighted.precision);
  }
}

TEST(EvaluateTest, ClassRelabelingPermutesPerClassRows) {
  std::mt19937_64 rng(3);
  const std::vector<std::uint32_t> perm{2, 0, 1};
  for (int trial = 0; trial < 200; ++trial) {
    auto [gold, pred] = random_pair(rng, 200, 3);
    std::vector<LabelId> g2, p2;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      g2.push_back(LabelId(perm[gold[i].value]));
      p2.push_back(LabelId(perm[pred[i].value]));
    }
    const auto a = evaluate(gold, pred, kSchema);
    const auto b = evaluate(g2, p2, kSchema);
    for (std::size_t k = 0; k < 3; ++k) {
      ASSERT_EQ(a.per_class[k].precision, b.per_class[perm[k]].precision);
      ASSERT_EQ(a.per_class[k].recall, b.per_class[perm[k]].recall);
      ASSERT_EQ(a.per_class[k].f1, b.per_class[perm[k]].f1);
    }
    ASSERT_EQ(a.micro.f1, b.micro.f1);
    // class sums are reassociated, so only the values (not the bits) agree
    ASSERT_NEAR(a.macro.precision, b.macro.precision, 1e-15);
    ASSERT_NEAR(a.macro.f1, b.macro.f1, 1e-15);
    ASSERT_NEAR(a.weighted.precision, b.weighted.precision, 1e-15);
    ASSERT_NEAR(a.weighted.f1, b.weighted.f1, 1e-15);
  }
}

TEST(DistributionTest, Examples) {
  const auto d = label_distribution(ids({0, 0, 1}), kSchema);
  EXPECT_EQ(d.counts, (std::vector<std::uint64_t>{2, 1, 0}));
  EXPECT_DOUBLE_EQ(d.fractions[0], 2.0 / 3.0);
  EXPECT_EQ(d.fractions[2], 0.0);

  const auto empty = label_distribution({}, kSchema);
  EXPECT_EQ(empty.counts, (std::vector<std::uint64_t>{0, 0, 0}));
  EXPECT_EQ(empty.fractions, (std::vector<double>{0, 0, 0}));

  EXPECT_THROW(label_distribution(ids({5}), kSchema), Error);
}

TEST(DistributionTest, FractionsSumToOne) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    auto [gold, pred] = random_pair(rng, 3000, 3);
    const auto d = label_distribution(gold, kSchema);
    ASSERT_EQ(std::accumulate(d.counts.begin(), d.counts.end(), std::uint64_t{0}), gold.size());
    ASSERT_NEAR(std::accumulate(d.fractions.begin(), d.fractions.end(), 0.0), 1.0, 1e-12);
  }
}
