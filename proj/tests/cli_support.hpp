#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cli_support {

namespace fs = std::filesystem;

inline fs::path scratch_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("affl1_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

inline Run run(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "cli.log";
  const std::string cmd = std::string("\"") + AFFL1_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

inline std::string data_arg(const std::string& name) {
  return "\"" + (fs::path(AFFL1_DATA_DIR) / name).string() + "\"";
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Header values ("# key: value") and data rows of a report.
struct Csv {
  std::vector<std::pair<std::string, std::string>> meta;
  std::string header;
  std::vector<std::vector<std::string>> rows;

  std::string get(const std::string& key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return v;
    return {};
  }
};

inline Csv read_csv(const fs::path& p) {
  Csv csv;
  std::istringstream in(read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      csv.meta.emplace_back(line.substr(2, colon - 2), colon == std::string::npos ? "" : line.substr(colon + 2));
    } else if (csv.header.empty()) {
      csv.header = line;
    } else {
      std::vector<std::string> fields;
      std::stringstream ss(line);
      std::string f;
      while (std::getline(ss, f, ',')) fields.push_back(f);
      if (!line.empty() && line.back() == ',') fields.emplace_back();
      csv.rows.push_back(fields);
    }
  }
  return csv;
}

/// File contents without the "# generated:" line.
inline std::string body_without_timestamp(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("# generated:", 0) != 0) out += line + '\n';
  return out;
}

}  // namespace cli_support
