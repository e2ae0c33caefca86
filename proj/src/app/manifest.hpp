#pragma once

#include "app/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace coco::app {

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

/// Writes manifest.txt: version, command, seed, SHA-256 of every input file and the effective
/// configuration. Keys that cannot change results (thread counts) are left out so the manifest
/// is identical across machines.
void write_manifest(const std::filesystem::path& out_dir, const std::string& command, const Config& config,
                    const std::vector<std::filesystem::path>& inputs);

extern const char* const kVersion;

} // namespace coco::app
