#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentivote/schema.hpp"

namespace sentivote {

// Gold-labelled samples in file order. Texts are carried through untouched.
struct GoldDataset {
  std::vector<std::string> ids;
  std::vector<std::string> texts;
  std::vector<LabelId> gold;

  std::size_t size() const noexcept { return ids.size(); }
};

// Row-major n x c matrix of class-probability rows, columns in schema order.
class PredictionMatrix {
 public:
  PredictionMatrix() = default;
  PredictionMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  PredictionMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const PredictionMatrix&, const PredictionMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// One model's aligned predictions. `weight` is the model's accuracy on its
// training data; it drives both top-k selection and the weighted vote.
struct ModelRun {
  std::string model_id;
  PredictionMatrix predictions;
  double weight = 0.0;
};

// Row sums inside [1 - tol, 1 + tol] are renormalized; anything else is rejected.
inline constexpr double kRowSumTolerance = 1e-6;

GoldDataset read_dataset(std::istream& in, const LabelSchema& schema,
                         const std::string& source = "<dataset>");
GoldDataset load_dataset(const std::filesystem::path& path, const LabelSchema& schema);
void write_dataset(std::ostream& out, const GoldDataset& dataset, const LabelSchema& schema);

ModelRun read_predictions(std::istream& in, const GoldDataset& dataset,
                          const LabelSchema& schema,
                          const std::string& source = "<predictions>");
ModelRun load_predictions(const std::filesystem::path& path, const GoldDataset& dataset,
                          const LabelSchema& schema);

// Writes the header record followed by one record per sample in dataset
// order. `extra_header` fields are merged into the header object.
void write_predictions(std::ostream& out, const ModelRun& run, const GoldDataset& dataset,
                       const LabelSchema& schema,
                       const nlohmann::ordered_json& extra_header = nlohmann::ordered_json::object());

// Validated gold data plus aligned runs with unique ids and matching shapes.
struct Bundle {
  GoldDataset dataset;
  std::vector<ModelRun> runs;
};

Bundle validate_bundle(std::vector<ModelRun> runs, GoldDataset dataset,
                       const LabelSchema& schema);

// Divides the row by its own sum after checking entries and tolerance.
// Throws Error{BadProbability} with `id` as detail.
void normalize_row(std::span<double> row, const std::string& id, const std::string& where = {});

}  // namespace sentivote
