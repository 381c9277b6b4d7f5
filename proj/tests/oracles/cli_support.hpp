#pragma once

// Scratch directories and fixture files for driving the command-line entry
// point in-process.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "permmap/cli/commands.hpp"
#include "support.hpp"

namespace testing_support {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("permmap-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<std::string> read_lines(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

struct CliResult {
  int status = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "permmap");
  std::ostringstream out, err;
  CliResult r;
  r.status = permmap::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// One violent event per location, in id order, so build_locations
/// reproduces the same ids. `groups[i]` names the attacker of the i-th event.
inline std::string events_csv(const std::vector<permmap::Location>& locs, const std::vector<std::string>& groups) {
  std::ostringstream out;
  out.precision(17);
  out << "event_date,actor1,latitude,longitude,country,admin1,event_type,fatalities\n";
  for (std::size_t i = 0; i < locs.size(); ++i) {
    out << "2012-01-" << (i % 28 + 1 < 10 ? "0" : "") << i % 28 + 1 << ',' << groups[i % groups.size()] << ','
        << locs[i].latitude << ',' << locs[i].longitude << ',' << locs[i].country << ',' << locs[i].admin_key
        << ",Remote violence," << i % 3 << '\n';
  }
  return out.str();
}

}  // namespace testing_support
