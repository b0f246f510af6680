#include "lieprob/experiment/artifacts.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "lieprob/experiment/config.hpp"

namespace lieprob::experiment {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw fs::filesystem_error("cannot open for writing", tmp, std::make_error_code(std::errc::io_error));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw fs::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
  }
  fs::rename(tmp, path);
}

std::string git_blob_sha1(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob += '\0';
  blob += content;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &length, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

CsvWriter& CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("csv row has the wrong number of columns");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_double(values[i]);
  }
  text_ += '\n';
  return *this;
}

CsvWriter& CsvWriter::row(std::size_t id, const std::vector<double>& values) {
  if (values.size() + 1 != columns_) throw std::logic_error("csv row has the wrong number of columns");
  text_ += std::to_string(id);
  for (const double v : values) {
    text_ += ',';
    text_ += format_double(v);
  }
  text_ += '\n';
  return *this;
}

ArtifactDir::ArtifactDir(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

void ArtifactDir::write(const std::string& name, const std::string& content) {
  write_atomic(dir_ / name, content);
  records_.push_back({name, content.size(), git_blob_sha1(content)});
}

void ArtifactDir::write_manifest(nlohmann::json manifest) {
  nlohmann::json list = nlohmann::json::array();
  for (const ArtifactRecord& r : records_) {
    list.push_back({{"name", r.name}, {"bytes", r.bytes}, {"sha1", r.sha1}});
  }
  manifest["artifacts"] = std::move(list);
  write_atomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace lieprob::experiment
