#include "ssn/report.hpp"

#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace ssn {

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[v & 0xf];
    v >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

}  // namespace

std::string RunManifest::digest() const {
  const std::string canonical =
      command + '\n' + version + '\n' + std::to_string(seed) + '\n' + params.dump();
  return hex64(fnv1a(canonical));
}

nlohmann::json RunManifest::to_json() const {
  return {{"command", command},
          {"version", version},
          {"seed", seed},
          {"timestamp", timestamp},
          {"params", params},
          {"digest", digest()}};
}

std::string current_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc())
    throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const RunManifest& manifest,
               const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "# " << manifest.command << "\n";
  out << "# manifest_digest=" << manifest.digest() << "\n";
  out << "# columns: ";
  for (size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (row[i]) out << format_number(*row[i]);
    }
    out << "\n";
  }
}

void write_json_mirror(const std::filesystem::path& path,
                       const RunManifest& manifest, const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      if (cell)
        r.push_back(*cell);
      else
        r.push_back(nullptr);
    }
    rows.push_back(std::move(r));
  }
  const nlohmann::json doc = {{"manifest", manifest.to_json()},
                              {"columns", table.columns},
                              {"rows", rows}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << doc.dump(2) << "\n";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << manifest.to_json().dump(2) << "\n";
}

}  // namespace ssn
