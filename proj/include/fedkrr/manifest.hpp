#pragma once

#include <string>
#include <vector>

#include "fedkrr/config.hpp"

namespace fedkrr {

std::string sha256_hex(const std::string& data);

// Writes <out_dir>/manifest.json: subcommand, config origin and content hash,
// the complete resolved configuration (defaults included), and the list of
// files the run produced. No timestamps; reruns are byte-identical.
void write_manifest(const std::string& out_dir, const std::string& subcommand,
                    const Config& cfg, const std::vector<std::string>& outputs);

}  // namespace fedkrr
