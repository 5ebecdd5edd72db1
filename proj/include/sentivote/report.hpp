#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentivote/ensemble.hpp"
#include "sentivote/metrics.hpp"

namespace sentivote {

// Column-aligned plain-text table. First column left-aligned, the rest right.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Formatting {
  bool full_precision = false;  // otherwise 3 decimals
};

std::string format_score(double value, Formatting fmt);

// Schemes listed in `averages` each get a row, tagged when more than one.
struct ModelRow {
  std::string model_id;
  EvalReport report;
};
void print_model_table(std::ostream& out, const std::vector<ModelRow>& rows,
                       const std::vector<Average>& averages, Formatting fmt);

struct EnsembleRow {
  EnsembleConfig config;
  EvalReport report;
};
void print_ensemble_table(std::ostream& out, const std::vector<EnsembleRow>& rows,
                          const std::vector<Average>& averages, Formatting fmt);

void print_per_class(std::ostream& out, const EvalReport& report, const LabelSchema& schema,
                     Formatting fmt);
void print_confusion(std::ostream& out, const ConfusionMatrix& cm, const LabelSchema& schema);
void print_distribution(std::ostream& out, const LabelDistribution& dist,
                        const LabelSchema& schema, Formatting fmt);

std::string_view to_string(Average avg);
Average parse_average(std::string_view name);

// Machine-readable records; always full precision.
nlohmann::ordered_json eval_record(const std::string& model_id, const EvalReport& report,
                                   const LabelSchema& schema);
nlohmann::ordered_json ensemble_record(const EnsembleConfig& config,
                                       const EnsemblePrediction& prediction,
                                       const EvalReport& report, const LabelSchema& schema);
std::vector<nlohmann::ordered_json> distribution_records(const LabelDistribution& dist,
                                                         const LabelSchema& schema);

}  // namespace sentivote
