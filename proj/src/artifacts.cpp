// SPDX-License-Identifier: Apache-2.0

#include "argsim/artifacts.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "argsim/common.hpp"
#include "argsim/text.hpp"

namespace argsim {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() /
                       (target.filename().string() + ".tmp-" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write: " + tmp.string());
  }
  fs::rename(tmp, target);
}

OutputDir::OutputDir(std::string path, bool dry_run)
    : path_(std::move(path)), dry_run_(dry_run) {
  if (path_.empty()) throw Error("output directory path is empty");
  if (!dry_run_) fs::create_directories(path_);
  // Staged commands share one output tree; carry forward earlier entries so
  // the manifest always covers the whole tree.
  const std::string manifest = file_path("manifest.json");
  if (!dry_run_ && fs::exists(manifest)) {
    std::ifstream in(manifest);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception&) {
      return;  // unreadable manifest is rebuilt from scratch
    }
    if (j.contains("artifacts")) {
      for (const auto& [relpath, entry] : j["artifacts"].items()) {
        Entry e;
        e.bytes = entry.value("bytes", 0ULL);
        e.fnv1a64 = entry.value("fnv1a64", "");
        entries_[relpath] = e;
      }
    }
  }
}

std::string OutputDir::file_path(const std::string& relpath) const {
  return (fs::path(path_) / relpath).string();
}

void OutputDir::write(const std::string& relpath, const std::string& content) {
  if (relpath.empty() || relpath.front() == '/') {
    throw Error("artifact path must be relative: " + relpath);
  }
  Entry e;
  e.bytes = content.size();
  e.fnv1a64 = to_hex(fnv1a64(content));
  entries_[relpath] = e;
  if (!dry_run_) write_file_atomic(file_path(relpath), content);
}

void OutputDir::finalize() {
  nlohmann::json j;
  j["artifacts"] = nlohmann::json::object();
  for (const auto& [relpath, entry] : entries_) {
    j["artifacts"][relpath] = {{"bytes", entry.bytes}, {"fnv1a64", entry.fnv1a64}};
  }
  if (!dry_run_) write_file_atomic(file_path("manifest.json"), j.dump(2) + "\n");
}

}  // namespace argsim
