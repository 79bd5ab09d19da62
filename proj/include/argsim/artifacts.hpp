// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace argsim {

/// Managed output tree. Files land via write-to-temp + atomic rename, and
/// every artifact is recorded in manifest.json with its size and FNV-1a
/// content hash, which is what the determinism checks compare.
class OutputDir {
 public:
  OutputDir(std::string path, bool dry_run = false);

  /// Writes (or, in dry-run mode, only records) one artifact.
  void write(const std::string& relpath, const std::string& content);

  /// Writes manifest.json; call once after the last artifact.
  void finalize();

  const std::string& path() const { return path_; }
  bool dry_run() const { return dry_run_; }

  struct Entry {
    std::uint64_t bytes = 0;
    std::string fnv1a64;
  };
  const std::map<std::string, Entry>& entries() const { return entries_; }

  std::string file_path(const std::string& relpath) const;

 private:
  std::string path_;
  bool dry_run_;
  std::map<std::string, Entry> entries_;
};

/// Atomic file write used by OutputDir and the model writer.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace argsim
