// Copyright 2026 The Bighead Authors
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
#include <iosfwd>
#include <string>
#include <vector>

#include "bighead/circuit.hpp"
#include "json.hpp"

namespace bighead {

inline constexpr const char *kToolVersion = "0.1.0";
inline constexpr int kManifestSchemaVersion = 1;

/// Written next to every `run` output as `<output>.manifest.json`.
struct RunManifest {
    std::string circuit_hash;
    /// FNV-1a of the order file bytes.
    std::string order_hash;
    std::string plan_hash;
    std::string s1;
    std::vector<int> open_qubits;
    std::uint64_t slice_begin = 0;
    std::uint64_t slice_end = 0;
    std::uint64_t slice_total = 0;
    std::string precision;
    std::string reduction;
    int threads = 1;
    std::string started;
    std::string finished;
};

nlohmann::json manifest_to_json(const RunManifest &m);
RunManifest manifest_from_json(const nlohmann::json &j);

/// Throws Error(provenance_mismatch) unless the stored hashes match the given
/// circuit and order file contents.
void check_manifest(const RunManifest &m, const Circuit &c, const std::string &order_text);

/// "3,5,7-9" -> {3, 5, 7, 8, 9}, ascending and deduplicated.
std::vector<int> parse_id_list(const std::string &text);

/// Entry point of the `bighead` tool. Returns the process exit code: 0
/// success, 2 input error, 3 search-budget failure, 4 internal error.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace bighead
