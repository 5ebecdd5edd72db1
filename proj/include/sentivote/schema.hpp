#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sentivote {

// Index into a LabelSchema. Ordering follows schema order, which is also the
// final tie-break order used by the ensemble.
struct LabelId {
  std::uint32_t value = 0;

  constexpr LabelId() = default;
  constexpr explicit LabelId(std::uint32_t v) : value(v) {}
  friend constexpr auto operator<=>(LabelId, LabelId) = default;
};

// Ordered, immutable set of class labels. Names are matched after trimming
// and ASCII case folding, so they must also be distinct under that folding.
class LabelSchema {
 public:
  explicit LabelSchema(std::vector<std::string> labels);

  // [Negative, Neutral, Positive]
  static LabelSchema default_schema();
  // One label per line; blank lines ignored.
  static LabelSchema from_file(const std::filesystem::path& path);

  std::size_t count() const noexcept { return labels_.size(); }
  std::span<const std::string> labels() const noexcept { return labels_; }
  const std::string& name(LabelId id) const;

  // Throws Error{UnknownLabel}. No aliases, no prefix matching.
  LabelId parse(std::string_view name) const;
  bool contains(LabelId id) const noexcept { return id.value < labels_.size(); }

  friend bool operator==(const LabelSchema&, const LabelSchema&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> folded_;
};

inline LabelId parse_label(std::string_view name, const LabelSchema& schema) {
  return schema.parse(name);
}

std::string fold_label(std::string_view name);

}  // namespace sentivote
