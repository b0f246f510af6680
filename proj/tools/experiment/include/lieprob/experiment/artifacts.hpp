#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace lieprob::experiment {

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// SHA-1 of "blob <size>\0<content>", as git hash-object computes it.
[[nodiscard]] std::string git_blob_sha1(const std::string& content);

/// ISO 8601 UTC timestamp with seconds.
[[nodiscard]] std::string utc_timestamp();

/// Builds CSV text; every number is written with 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  CsvWriter& row(const std::vector<double>& values);
  /// First column an integer id, the rest numbers.
  CsvWriter& row(std::size_t id, const std::vector<double>& values);
  [[nodiscard]] const std::string& str() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

struct ArtifactRecord {
  std::string name;
  std::size_t bytes = 0;
  std::string sha1;
};

/// Output directory of one command. Every file goes through `write`, so the
/// manifest lists exactly what exists.
class ArtifactDir {
 public:
  explicit ArtifactDir(std::filesystem::path dir);

  void write(const std::string& name, const std::string& content);
  [[nodiscard]] const std::vector<ArtifactRecord>& records() const noexcept { return records_; }
  [[nodiscard]] const std::filesystem::path& path() const noexcept { return dir_; }

  /// Writes manifest.json listing every artifact written so far.
  void write_manifest(nlohmann::json manifest);

 private:
  std::filesystem::path dir_;
  std::vector<ArtifactRecord> records_;
};

}  // namespace lieprob::experiment
