#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace boxlab {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Self-description embedded at the top of every report: the command, its
// fully resolved configuration, seed, version, digests of every input
// file, and the output paths. Rerunning the command it records reproduces
// the report byte for byte, so no timestamps or machine state belong here.
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  std::vector<std::string> outputs;
  std::vector<std::string> notes;

  void add_input(const std::string& path);

  // One-line JSON with sorted keys.
  std::string to_json_line() const;

  // The line written at the top of reports: "# " + to_json_line().
  std::string preamble() const;
};

std::string sha256_file(const std::string& path);

// Round-trip double formatting (shortest representation).
std::string format_double(double value);

}  // namespace boxlab
