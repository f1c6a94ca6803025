// Copyright 2026 The Fairgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fairgame::harness {

/// Git-style blob hash: SHA-1 of "blob <size>\0<bytes>", hex encoded.
std::string git_blob_sha1(const std::string& bytes);

/// Reproducibility record written as the last file of every CLI run: the
/// effective seed, the config content hash, and content hashes of every
/// input file the run consumed. Contains no wall-clock data, so reruns
/// produce byte-identical manifests.
struct Manifest {
    std::string command;
    std::string config_path;
    std::string config_sha1;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> input_sha1;  // path -> blob hash
    std::vector<std::string> outputs;               // file names within the run directory
};

std::string manifest_to_json(const Manifest& manifest);
void write_manifest(const std::filesystem::path& out_dir, const Manifest& manifest);

}  // namespace fairgame::harness
