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

#include "output.hpp"

#include "breathtrap/cli.hpp"
#include "breathtrap/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace breathtrap::cli {

namespace fs = std::filesystem;

std::string format_number(double v) {
    if (!std::isfinite(v)) throw numerics::NumericalError("non-finite value in output");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvWriter::header(std::span<const std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) text_ += ',';
        text_ += names[i];
    }
    text_ += '\n';
}

void CsvWriter::row(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) text_ += ',';
        text_ += format_number(values[i]);
    }
    text_ += '\n';
}

void CsvWriter::row(const std::string& label, std::span<const double> values) {
    text_ += label;
    for (double v : values) {
        text_ += ',';
        text_ += format_number(v);
    }
    text_ += '\n';
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : parameters) params[k] = v;
    nlohmann::ordered_json j;
    j["command"] = command;
    j["parameters"] = params;
    j["tool_version"] = tool_version();
    j["wall_clock_seconds"] = wall_clock_seconds;
    j["outputs"] = outputs;
    return j;
}

std::vector<std::string> RunManifest::replay_args() const {
    std::vector<std::string> args;
    std::istringstream words(command);
    for (std::string w; words >> w;) args.push_back(w);
    for (const auto& [k, v] : parameters) {
        args.push_back("--" + k);
        args.push_back(v);
    }
    return args;
}

RunManifest RunManifest::from_json(const nlohmann::ordered_json& j) {
    RunManifest m;
    try {
        m.command = j.at("command").get<std::string>();
        for (const auto& [k, v] : j.at("parameters").items()) m.parameters.emplace_back(k, v.get<std::string>());
        if (j.contains("outputs")) m.outputs = j.at("outputs").get<std::vector<std::string>>();
        if (j.contains("wall_clock_seconds")) m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void commit_outputs(const fs::path& dir, const std::vector<OutputFile>& files) {
    fs::create_directories(dir);
    std::vector<fs::path> staged;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& p : staged) fs::remove(p, ec);
    };
    try {
        for (const auto& f : files) {
            const fs::path tmp = dir / (f.name + ".tmp");
            staged.push_back(tmp);
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            os.write(f.content.data(), static_cast<std::streamsize>(f.content.size()));
            os.close();
            if (!os) throw std::runtime_error("cannot write " + tmp.string());
        }
        for (std::size_t i = 0; i < files.size(); ++i) fs::rename(staged[i], dir / files[i].name);
    } catch (...) {
        cleanup();
        throw;
    }
}

}  // namespace breathtrap::cli
