#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentivote/schema.hpp"

namespace sentivote {

struct InputDigest {
  std::string path;
  std::string sha256;
};

// Provenance block attached to every report.
struct RunManifest {
  std::vector<std::string> command_line;
  std::vector<InputDigest> inputs;
  std::vector<std::string> schema;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::string tool_version = SENTIVOTE_VERSION;
  std::string timestamp;  // ISO-8601 UTC

  nlohmann::ordered_json to_json() const;
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);
std::string utc_timestamp_now();

RunManifest make_manifest(std::vector<std::string> command_line,
                          const std::vector<std::filesystem::path>& inputs,
                          const LabelSchema& schema, std::string timestamp);

}  // namespace sentivote
