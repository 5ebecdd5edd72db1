#include "sentivote/ingest.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "sentivote/errors.hpp"

namespace sentivote {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string at_line(const std::string& source, std::size_t line_no) {
  return source + ":" + std::to_string(line_no);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void strip_bom(std::string& line) {
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

json parse_record(const std::string& line, const std::string& where) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedRow, "invalid JSON record", where);
  }
  if (!record.is_object()) throw Error(ErrorKind::MalformedRow, "record is not an object", where);
  return record;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open file", path.string());
  return in;
}

}  // namespace

PredictionMatrix::PredictionMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::ShapeMismatch, "matrix data does not match " + std::to_string(rows_) +
                                              "x" + std::to_string(cols_));
  }
}

void normalize_row(std::span<double> row, const std::string& id, const std::string& where) {
  double sum = 0.0;
  for (const double p : row) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorKind::BadProbability, id + " (negative or non-finite entry)", where);
    }
    sum += p;
  }
  if (!(std::fabs(sum - 1.0) <= kRowSumTolerance)) {
    throw Error(ErrorKind::BadProbability, id + " (row sum outside tolerance)", where);
  }
  for (double& p : row) p /= sum;
}

GoldDataset read_dataset(std::istream& in, const LabelSchema& schema, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::MalformedRow, "missing header", at_line(source, 1));
  }
  strip_bom(line);
  strip_cr(line);
  if (line != "id\ttext\tlabel") {
    throw Error(ErrorKind::MalformedRow, "expected header 'id<TAB>text<TAB>label'",
                at_line(source, 1));
  }

  GoldDataset dataset;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto where = at_line(source, line_no);
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw Error(ErrorKind::MalformedRow,
                  "expected 3 tab-separated fields, got " + std::to_string(fields.size()), where);
    }
    std::string id(fields[0]);
    if (id.empty()) throw Error(ErrorKind::MalformedRow, "empty id", where);
    if (!seen.insert(id).second) throw Error(ErrorKind::DuplicateId, id, where);

    LabelId label;
    try {
      label = schema.parse(fields[2]);
    } catch (const Error& e) {
      throw Error(e.kind(), e.detail(), where);
    }
    dataset.ids.push_back(std::move(id));
    dataset.texts.emplace_back(fields[1]);
    dataset.gold.push_back(label);
  }
  return dataset;
}

GoldDataset load_dataset(const std::filesystem::path& path, const LabelSchema& schema) {
  auto in = open_input(path);
  return read_dataset(in, schema, path.string());
}

void write_dataset(std::ostream& out, const GoldDataset& dataset, const LabelSchema& schema) {
  out << "id\ttext\tlabel\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& text = dataset.texts[i];
    if (text.find_first_of("\t\n") != std::string::npos) {
      throw Error(ErrorKind::MalformedRow, dataset.ids[i] + " (text contains tab or newline)");
    }
    out << dataset.ids[i] << '\t' << text << '\t' << schema.name(dataset.gold[i]) << '\n';
  }
}

ModelRun read_predictions(std::istream& in, const GoldDataset& dataset, const LabelSchema& schema,
                          const std::string& source) {
  const std::size_t c = schema.count();
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(line);
      if (line_no == 1) strip_bom(line);
      if (!is_blank(line)) return true;
    }
    return false;
  };

  if (!next_line()) throw Error(ErrorKind::MalformedRow, "missing header record", at_line(source, 1));

  ModelRun run;
  // column_of[k] = schema column for the k-th label listed in the header
  std::vector<std::size_t> column_of;
  {
    const auto where = at_line(source, line_no);
    const auto header = parse_record(line, where);
    if (!header.contains("model_id") || !header["model_id"].is_string() ||
        header["model_id"].get<std::string>().empty()) {
      throw Error(ErrorKind::MalformedRow, "header needs a non-empty string model_id", where);
    }
    if (!header.contains("weight") || !header["weight"].is_number()) {
      throw Error(ErrorKind::MalformedRow, "header needs a numeric weight", where);
    }
    if (!header.contains("labels") || !header["labels"].is_array()) {
      throw Error(ErrorKind::MalformedRow, "header needs a labels array", where);
    }
    run.model_id = header["model_id"].get<std::string>();
    run.weight = header["weight"].get<double>();
    if (!std::isfinite(run.weight) || run.weight < 0.0 || run.weight > 1.0) {
      throw Error(ErrorKind::WeightOutOfRange, run.model_id + " weight " + header["weight"].dump(),
                  where);
    }
    const auto& labels = header["labels"];
    if (labels.size() != c) {
      throw Error(ErrorKind::ShapeMismatch,
                  "header lists " + std::to_string(labels.size()) + " labels, schema has " +
                      std::to_string(c),
                  where);
    }
    std::vector<bool> used(c, false);
    for (const auto& label : labels) {
      if (!label.is_string()) throw Error(ErrorKind::MalformedRow, "label names must be strings", where);
      LabelId id;
      try {
        id = schema.parse(label.get<std::string>());
      } catch (const Error& e) {
        throw Error(e.kind(), e.detail(), where);
      }
      if (used[id.value]) {
        throw Error(ErrorKind::ShapeMismatch, "label listed twice: " + label.get<std::string>(),
                    where);
      }
      used[id.value] = true;
      column_of.push_back(id.value);
    }
  }

  std::unordered_map<std::string_view, std::size_t> row_of;
  row_of.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) row_of.emplace(dataset.ids[i], i);

  run.predictions = PredictionMatrix(dataset.size(), c);
  std::vector<bool> filled(dataset.size(), false);

  while (next_line()) {
    const auto where = at_line(source, line_no);
    const auto record = parse_record(line, where);
    if (!record.contains("id") || !record["id"].is_string()) {
      throw Error(ErrorKind::MalformedRow, "record needs a string id", where);
    }
    if (!record.contains("probs") || !record["probs"].is_array()) {
      throw Error(ErrorKind::MalformedRow, "record needs a probs array", where);
    }
    const auto id = record["id"].get<std::string>();
    const auto found = row_of.find(id);
    if (found == row_of.end()) throw Error(ErrorKind::ExtraSample, id, where);
    const std::size_t i = found->second;
    if (filled[i]) throw Error(ErrorKind::DuplicateId, id, where);

    const auto& probs = record["probs"];
    if (probs.size() != c) {
      throw Error(ErrorKind::ShapeMismatch,
                  id + " has " + std::to_string(probs.size()) + " probabilities", where);
    }
    auto row = run.predictions.row(i);
    for (std::size_t k = 0; k < c; ++k) {
      if (!probs[k].is_number()) {
        throw Error(ErrorKind::BadProbability, id + " (non-numeric entry)", where);
      }
      row[column_of[k]] = probs[k].get<double>();
    }
    normalize_row(row, id, where);
    filled[i] = true;
  }

  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!filled[i]) throw Error(ErrorKind::MissingSample, dataset.ids[i], source);
  }
  return run;
}

ModelRun load_predictions(const std::filesystem::path& path, const GoldDataset& dataset,
                          const LabelSchema& schema) {
  auto in = open_input(path);
  return read_predictions(in, dataset, schema, path.string());
}

void write_predictions(std::ostream& out, const ModelRun& run, const GoldDataset& dataset,
                       const LabelSchema& schema, const ordered_json& extra_header) {
  if (run.predictions.rows() != dataset.size() || run.predictions.cols() != schema.count()) {
    throw Error(ErrorKind::ShapeMismatch, run.model_id + " does not match dataset/schema");
  }
  ordered_json header;
  header["model_id"] = run.model_id;
  header["weight"] = run.weight;
  header["labels"] = std::vector<std::string>(schema.labels().begin(), schema.labels().end());
  for (const auto& [key, value] : extra_header.items()) header[key] = value;
  out << header.dump() << '\n';

  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto row = run.predictions.row(i);
    ordered_json record;
    record["id"] = dataset.ids[i];
    record["probs"] = std::vector<double>(row.begin(), row.end());
    out << record.dump() << '\n';
  }
}

Bundle validate_bundle(std::vector<ModelRun> runs, GoldDataset dataset, const LabelSchema& schema) {
  if (runs.empty()) throw Error(ErrorKind::EmptyBundle, "no prediction runs supplied");
  if (dataset.texts.size() != dataset.size() || dataset.gold.size() != dataset.size()) {
    throw Error(ErrorKind::ShapeMismatch, "dataset columns have different lengths");
  }
  for (const auto label : dataset.gold) {
    if (!schema.contains(label)) {
      throw Error(ErrorKind::LabelOutOfRange, "gold label " + std::to_string(label.value));
    }
  }
  std::unordered_set<std::string> model_ids;
  for (const auto& run : runs) {
    if (run.model_id.empty()) throw Error(ErrorKind::BadConfig, "empty model_id");
    if (!model_ids.insert(run.model_id).second) {
      throw Error(ErrorKind::DuplicateModelId, run.model_id);
    }
    if (run.predictions.rows() != dataset.size() || run.predictions.cols() != schema.count()) {
      throw Error(ErrorKind::ShapeMismatch,
                  run.model_id + " is " + std::to_string(run.predictions.rows()) + "x" +
                      std::to_string(run.predictions.cols()) + ", expected " +
                      std::to_string(dataset.size()) + "x" + std::to_string(schema.count()));
    }
    if (!std::isfinite(run.weight) || run.weight < 0.0 || run.weight > 1.0) {
      throw Error(ErrorKind::WeightOutOfRange, run.model_id);
    }
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto row = run.predictions.row(i);
      double sum = 0.0;
      for (const double p : row) {
        if (!std::isfinite(p) || p < 0.0) {
          throw Error(ErrorKind::BadProbability, run.model_id + "/" + dataset.ids[i]);
        }
        sum += p;
      }
      if (!(std::fabs(sum - 1.0) <= kRowSumTolerance)) {
        throw Error(ErrorKind::BadProbability, run.model_id + "/" + dataset.ids[i]);
      }
    }
  }
  return Bundle{std::move(dataset), std::move(runs)};
}

}  // namespace sentivote
