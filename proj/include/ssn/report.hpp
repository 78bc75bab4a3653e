#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ssn {

inline constexpr const char* kToolVersion = "ssn 0.1.0";

/// Run manifest serialized next to every output. The digest covers the
/// resolved parameters, command, seed and version but never the timestamp,
/// so identical runs emit identical CSV bytes.
struct RunManifest {
  std::string command;
  std::string version = kToolVersion;
  std::uint64_t seed = 0;
  std::string timestamp;  // ISO 8601, excluded from the digest
  nlohmann::json params;

  std::string digest() const;
  nlohmann::json to_json() const;
};

std::string current_timestamp();

/// Locale-independent shortest round-trip formatting.
std::string format_number(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
};

/// CSV with '#' header comments carrying the manifest digest and the column
/// documentation.
void write_csv(const std::filesystem::path& path, const RunManifest& manifest,
               const Table& table);

/// JSON mirror of the same table, manifest included.
void write_json_mirror(const std::filesystem::path& path,
                       const RunManifest& manifest, const Table& table);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace ssn
