#include "sentivote/schema.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "sentivote/errors.hpp"

namespace sentivote {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n\f\v";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(kWhitespace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kWhitespace);
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string fold_label(std::string_view name) {
  std::string out(trim(name));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) {
    return (ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch - 'A' + 'a')
                                    : static_cast<char>(ch);
  });
  return out;
}

LabelSchema::LabelSchema(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw Error(ErrorKind::BadSchema, "a schema needs at least two labels");
  }
  std::unordered_set<std::string> seen;
  folded_.reserve(labels_.size());
  for (auto& label : labels_) {
    label = std::string(trim(label));
    if (label.empty()) throw Error(ErrorKind::BadSchema, "empty label name");
    auto folded = fold_label(label);
    if (!seen.insert(folded).second) {
      throw Error(ErrorKind::BadSchema, "duplicate label '" + label + "'");
    }
    folded_.push_back(std::move(folded));
  }
}

LabelSchema LabelSchema::default_schema() {
  return LabelSchema({"Negative", "Neutral", "Positive"});
}

LabelSchema LabelSchema::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open schema file", path.string());
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    labels.emplace_back(trim(line));
  }
  try {
    return LabelSchema(std::move(labels));
  } catch (const Error& e) {
    throw Error(e.kind(), e.detail(), path.string());
  }
}

const std::string& LabelSchema::name(LabelId id) const {
  if (!contains(id)) {
    throw Error(ErrorKind::LabelOutOfRange, "label index " + std::to_string(id.value));
  }
  return labels_[id.value];
}

LabelId LabelSchema::parse(std::string_view name) const {
  const auto folded = fold_label(name);
  const auto it = std::find(folded_.begin(), folded_.end(), folded);
  if (it == folded_.end()) throw Error(ErrorKind::UnknownLabel, std::string(name));
  return LabelId(static_cast<std::uint32_t>(it - folded_.begin()));
}

}  // namespace sentivote
