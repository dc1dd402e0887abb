#include "boxlab/manifest.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace boxlab {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for digest: " + path);

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("digest init failed");
  }
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void RunManifest::add_input(const std::string& path) {
  inputs.emplace_back(path, sha256_file(path));
}

std::string RunManifest::to_json_line() const {
  nlohmann::json j;
  j["artifact_version"] = kArtifactVersion;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  auto ins = nlohmann::json::array();
  for (const auto& [path, digest] : inputs)
    ins.push_back({{"path", path}, {"sha256", digest}});
  j["inputs"] = ins;
  j["outputs"] = outputs;
  if (!notes.empty()) j["notes"] = notes;
  return j.dump();
}

std::string RunManifest::preamble() const { return "# " + to_json_line(); }

}  // namespace boxlab
