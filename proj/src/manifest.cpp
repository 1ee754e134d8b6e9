#include "fedkrr/manifest.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "fedkrr/core.hpp"

namespace fedkrr {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  require(ctx != nullptr, "sha256: context allocation failed");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, data.data(), data.size());
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

void write_manifest(const std::string& out_dir, const std::string& subcommand,
                    const Config& cfg, const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["config"] = {{"origin", cfg.origin()}, {"sha256", sha256_hex(cfg.raw_text())}};
  j["resolved"] = nlohmann::json::object();
  for (const auto& [key, value] : cfg.resolved()) j["resolved"][key] = value;
  j["outputs"] = outputs;
  std::ofstream os(std::filesystem::path(out_dir) / "manifest.json");
  require(bool(os), "manifest: cannot write into " + out_dir);
  os << j.dump(2) << "\n";
}

}  // namespace fedkrr
