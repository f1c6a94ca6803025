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

#include "fairgame/manifest.hpp"

#include <openssl/evp.h>

#include <json.hpp>
#include <stdexcept>

#include "fairgame/csvio.hpp"

namespace fairgame::harness {

std::string git_blob_sha1(const std::string& bytes) {
    std::string blob = "blob " + std::to_string(bytes.size());
    blob.push_back('\0');
    blob += bytes;

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    if (EVP_Digest(blob.data(), blob.size(), digest, &digest_len, EVP_sha1(), nullptr) != 1) {
        throw std::runtime_error("git_blob_sha1: digest computation failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * digest_len);
    for (unsigned int i = 0; i < digest_len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string manifest_to_json(const Manifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["config_path"] = manifest.config_path;
    j["config_sha1"] = manifest.config_sha1;
    j["seed"] = manifest.seed;
    j["inputs"] = nlohmann::json::object();
    for (const auto& [path, sha] : manifest.input_sha1) j["inputs"][path] = sha;
    j["outputs"] = manifest.outputs;
    return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& out_dir, const Manifest& manifest) {
    write_text_file(out_dir / "manifest.json", manifest_to_json(manifest));
}

}  // namespace fairgame::harness
