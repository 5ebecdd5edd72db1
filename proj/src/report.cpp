#include "sentivote/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "sentivote/errors.hpp"

namespace sentivote {

void TextTable::print(std::ostream& out) const {
  std::vector<std::size_t> widths(header_.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size() && k < widths.size(); ++k) {
      widths[k] = std::max(widths[k], row[k].size());
    }
  };
  widen(header_);
  for (const auto& row : rows_) widen(row);

  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t k = 0; k < widths.size(); ++k) {
      const std::string cell = k < row.size() ? row[k] : std::string();
      const std::string pad(widths[k] - cell.size(), ' ');
      if (k > 0) line += "  ";
      line += k == 0 ? cell + pad : pad + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };

  emit(header_);
  std::size_t total = 0;
  for (const auto w : widths) total += w;
  total += 2 * (widths.empty() ? 0 : widths.size() - 1);
  out << std::string(total, '-') << '\n';
  for (const auto& row : rows_) emit(row);
}

std::string format_score(double value, Formatting fmt) {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt.full_precision ? "%.17g" : "%.3f", value);
  return buf;
}

std::string_view to_string(Average avg) {
  switch (avg) {
    case Average::Micro: return "micro";
    case Average::Macro: return "macro";
    case Average::Weighted: return "weighted";
  }
  return "micro";
}

Average parse_average(std::string_view name) {
  if (name == "micro") return Average::Micro;
  if (name == "macro") return Average::Macro;
  if (name == "weighted") return Average::Weighted;
  throw Error(ErrorKind::BadConfig, "unknown averaging scheme '" + std::string(name) + "'");
}

namespace {

void add_score_cells(std::vector<std::string>& row, double accuracy, const Scores& s,
                     Formatting fmt) {
  row.push_back(format_score(accuracy, fmt));
  row.push_back(format_score(s.precision, fmt));
  row.push_back(format_score(s.recall, fmt));
  row.push_back(format_score(s.f1, fmt));
}

nlohmann::ordered_json scores_json(const Scores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

void fill_eval(nlohmann::ordered_json& j, const EvalReport& report, const LabelSchema& schema) {
  j["n"] = report.confusion.total();
  j["accuracy"] = report.accuracy;
  j["micro"] = scores_json(report.micro);
  j["macro"] = scores_json(report.macro);
  j["weighted"] = scores_json(report.weighted);
  auto& per_class = j["per_class"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < report.per_class.size(); ++k) {
    auto entry = scores_json(report.per_class[k]);
    nlohmann::ordered_json row;
    row["label"] = schema.labels()[k];
    row.update(entry);
    row["support"] = report.support[k];
    per_class.push_back(std::move(row));
  }
  auto& cm = j["confusion"] = nlohmann::ordered_json::array();
  for (std::size_t g = 0; g < report.confusion.classes(); ++g) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t p = 0; p < report.confusion.classes(); ++p) {
      row.push_back(report.confusion.at(g, p));
    }
    cm.push_back(std::move(row));
  }
}

}  // namespace

void print_model_table(std::ostream& out, const std::vector<ModelRow>& rows,
                       const std::vector<Average>& averages, Formatting fmt) {
  const bool tagged = averages.size() > 1;
  std::vector<std::string> header{"Model"};
  if (tagged) header.push_back("Avg");
  for (const char* h : {"Acc.", "Pre.", "Rec.", "F1"}) header.push_back(h);
  TextTable table(std::move(header));
  for (const auto& row : rows) {
    for (const auto avg : averages) {
      std::vector<std::string> cells{row.model_id};
      if (tagged) cells.emplace_back(to_string(avg));
      add_score_cells(cells, row.report.accuracy, row.report.averaged(avg), fmt);
      table.add_row(std::move(cells));
    }
  }
  table.print(out);
}

void print_ensemble_table(std::ostream& out, const std::vector<EnsembleRow>& rows,
                          const std::vector<Average>& averages, Formatting fmt) {
  const bool tagged = averages.size() > 1;
  std::vector<std::string> header{"Method", "Top"};
  if (tagged) header.push_back("Avg");
  for (const char* h : {"Acc.", "Prec.", "Rec.", "F1"}) header.push_back(h);
  TextTable table(std::move(header));
  for (const auto& row : rows) {
    for (const auto avg : averages) {
      std::vector<std::string> cells{std::string(to_string(row.config.method)),
                                     row.config.top_k.k ? row.config.top_k.to_string() : "All"};
      if (tagged) cells.emplace_back(to_string(avg));
      add_score_cells(cells, row.report.accuracy, row.report.averaged(avg), fmt);
      table.add_row(std::move(cells));
    }
  }
  table.print(out);
}

void print_per_class(std::ostream& out, const EvalReport& report, const LabelSchema& schema,
                     Formatting fmt) {
  TextTable table({"Label", "Pre.", "Rec.", "F1", "Support"});
  for (std::size_t k = 0; k < report.per_class.size(); ++k) {
    const auto& s = report.per_class[k];
    table.add_row({schema.labels()[k], format_score(s.precision, fmt),
                   format_score(s.recall, fmt), format_score(s.f1, fmt),
                   std::to_string(report.support[k])});
  }
  table.print(out);
}

void print_confusion(std::ostream& out, const ConfusionMatrix& cm, const LabelSchema& schema) {
  std::vector<std::string> header{"gold \\ pred"};
  for (const auto& label : schema.labels()) header.push_back(label);
  TextTable table(std::move(header));
  for (std::size_t g = 0; g < cm.classes(); ++g) {
    std::vector<std::string> row{schema.labels()[g]};
    for (std::size_t p = 0; p < cm.classes(); ++p) row.push_back(std::to_string(cm.at(g, p)));
    table.add_row(std::move(row));
  }
  table.print(out);
}

void print_distribution(std::ostream& out, const LabelDistribution& dist,
                        const LabelSchema& schema, Formatting fmt) {
  TextTable table({"Label", "Count", "Fraction"});
  for (std::size_t k = 0; k < dist.counts.size(); ++k) {
    table.add_row({schema.labels()[k], std::to_string(dist.counts[k]),
                   format_score(dist.fractions[k], fmt)});
  }
  table.add_row({"Total", std::to_string(dist.total), ""});
  table.print(out);
}

nlohmann::ordered_json eval_record(const std::string& model_id, const EvalReport& report,
                                   const LabelSchema& schema) {
  nlohmann::ordered_json j;
  j["type"] = "eval";
  j["model_id"] = model_id;
  fill_eval(j, report, schema);
  return j;
}

nlohmann::ordered_json ensemble_record(const EnsembleConfig& config,
                                       const EnsemblePrediction& prediction,
                                       const EvalReport& report, const LabelSchema& schema) {
  nlohmann::ordered_json j;
  j["type"] = "ensemble";
  j["method"] = to_string(config.method);
  j["top_k"] = config.top_k.to_string();
  j["tie_break"] = to_string(config.tie_break);
  j["models"] = prediction.contributing_models;
  fill_eval(j, report, schema);
  return j;
}

std::vector<nlohmann::ordered_json> distribution_records(const LabelDistribution& dist,
                                                         const LabelSchema& schema) {
  std::vector<nlohmann::ordered_json> records;
  for (std::size_t k = 0; k < dist.counts.size(); ++k) {
    nlohmann::ordered_json j;
    j["type"] = "stats";
    j["label"] = schema.labels()[k];
    j["count"] = dist.counts[k];
    j["fraction"] = dist.fractions[k];
    records.push_back(std::move(j));
  }
  return records;
}

}  // namespace sentivote
