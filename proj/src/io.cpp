#include "dqpt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dqpt::io {

namespace fs = std::filesystem;

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
}

namespace {

void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path partial = path.string() + ".partial";
    {
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open " + partial.string() + " for writing");
        out << content;
    }
    fs::rename(partial, path);
}

std::string join_row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

}  // namespace

void write_csv(const fs::path& path, const Csv& csv) {
    std::string content = join_row(csv.header);
    for (const auto& row : csv.rows) content += join_row(row);
    atomic_write(path, content);
}

std::string file_hash(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot hash missing file " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const fs::path& path, const RunManifest& manifest) {
    nlohmann::json j;
    j["spec"] = manifest.spec_echo;
    j["tool_version"] = manifest.tool_version;
    j["wall_time_seconds"] = manifest.wall_time_seconds;
    j["outputs"] = nlohmann::json::array();
    for (const auto& p : manifest.outputs) {
        nlohmann::json entry;
        entry["path"] = p.filename().string();
        entry["fnv1a64"] = file_hash(p);
        j["outputs"].push_back(entry);
    }
    atomic_write(path, j.dump(2) + "\n");
}

std::map<std::string, std::string> read_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": expected key=value");
        out[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return out;
}

DirectoryLock::DirectoryLock(const fs::path& dir) : lock_path_(dir / ".lock") {
    fs::create_directories(dir);
    std::FILE* f = std::fopen(lock_path_.c_str(), "wx");
    if (!f)
        throw ValidationError("run directory " + dir.string() +
                              " is locked by another invocation (remove .lock if stale)");
    std::fclose(f);
    held_ = true;
}

DirectoryLock::~DirectoryLock() {
    if (held_) {
        std::error_code ec;
        fs::remove(lock_path_, ec);
    }
}

}  // namespace dqpt::io
