#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sentivote/ingest.hpp"

namespace sentivote {

struct SimModel {
  std::string model_id;   // generated as "sim-NN" when empty
  double accuracy = 0.7;  // chance that the predicted class equals gold
  double sharpness = 4.0; // >= 1; larger puts more mass on the predicted class
};

struct SimSpec {
  std::size_t n = 0;
  std::vector<double> class_priors;
  std::vector<SimModel> models;
  std::uint64_t seed = 0;
  // Exactly round(accuracy * n) correct samples per model, placed by a seeded
  // shuffle, instead of an independent per-sample coin.
  bool exact_accuracy = false;
};

struct SimOutput {
  GoldDataset dataset;
  std::vector<ModelRun> runs;
};

// Portable uniform draws on top of std::mt19937_64, whose output sequence is
// fixed by the standard. Standard distributions are avoided because their
// algorithms are implementation-defined.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // [0, bound)
  std::size_t below(std::size_t bound) {
    const auto v = static_cast<std::size_t>(uniform() * static_cast<double>(bound));
    return v < bound ? v : bound - 1;
  }

 private:
  std::mt19937_64 engine_;
};

// Throws BadSpec. class_priors.size() must equal schema.count().
SimOutput generate(const SimSpec& spec, const LabelSchema& schema);

// dataset.tsv plus one <model_id>.jsonl per model; returns the written paths.
std::vector<std::filesystem::path> write_sim_output(const SimOutput& output, const SimSpec& spec,
                                                    const LabelSchema& schema,
                                                    const std::filesystem::path& dir);

}  // namespace sentivote
