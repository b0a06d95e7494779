// Copyright 2026 The breathtrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "json.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace breathtrap::cli {

// %.17g; throws NumericalError on NaN/Inf so nothing non-finite is emitted.
std::string format_number(double v);

class CsvWriter {
public:
    void header(std::span<const std::string> names);
    void row(std::span<const double> values);
    void row(const std::string& label, std::span<const double> values);
    const std::string& str() const { return text_; }

private:
    std::string text_;
};

struct OutputFile {
    std::string name;
    std::string content;
};

// Resolved flags in command-line order; replay feeds them back verbatim.
using ResolvedArgs = std::vector<std::pair<std::string, std::string>>;

struct RunManifest {
    std::string command;  // "well floquet" etc.
    ResolvedArgs parameters;
    double wall_clock_seconds = 0.0;
    std::vector<std::string> outputs;

    nlohmann::ordered_json to_json() const;
    // Full argument vector (subcommand words + flags), without --out.
    std::vector<std::string> replay_args() const;
    static RunManifest from_json(const nlohmann::ordered_json& j);
};

inline constexpr const char* kManifestName = "manifest.json";

// Writes every file to <name>.tmp and renames once all writes succeeded,
// so a failure leaves no partial outputs behind.
void commit_outputs(const std::filesystem::path& dir, const std::vector<OutputFile>& files);

std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace breathtrap::cli
