#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dqpt/engine.hpp"

namespace dqpt::io {

/// 17-significant-digit scientific formatting; the one representation used
/// in every CSV cell so repeated runs diff byte-for-byte.
std::string format_number(double x);

/// One CSV table: header row plus string cells. Written atomically via a
/// .partial rename.
struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::filesystem::path& path, const Csv& csv);

/// FNV-1a 64-bit content hash, hex-encoded; recorded per output file.
std::string file_hash(const std::filesystem::path& path);

/// Completion marker: written last, after all data files, so its presence
/// certifies a finished run.
struct RunManifest {
    std::map<std::string, std::string> spec_echo;
    std::string tool_version;
    double wall_time_seconds = 0.0;
    std::vector<std::filesystem::path> outputs;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

/// Flat key=value config file; '#' starts a comment. Unknown keys throw.
std::map<std::string, std::string> read_config(const std::filesystem::path& path);

/// Exclusive .lock file in the run directory; concurrent runs must use
/// distinct directories. Released on destruction.
class DirectoryLock {
  public:
    explicit DirectoryLock(const std::filesystem::path& dir);
    ~DirectoryLock();
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

  private:
    std::filesystem::path lock_path_;
    bool held_ = false;
};

}  // namespace dqpt::io
