// SPDX-License-Identifier: Apache-2.0
//
// risdeploy - RIS deployment planning for indoor dense mmWave networks
// Copyright (C) 2026 The risdeploy authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "json.hpp"

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace risdeploy
{
    inline constexpr const char *kToolVersion = "0.1.0";

    enum ExitCode : int
    {
        ExitSuccess = 0,
        ExitPartial = 2,
        ExitInputError = 3,
        ExitInternalError = 4
    };

    /// Run record written before a command starts and finalized after it ends.
    class RunManifest
    {
      public:
        RunManifest(std::string command, std::vector<std::string> argv, std::filesystem::path path);

        nlohmann::json &config() { return doc_["config"]; }
        void set_seed(std::uint64_t seed) { doc_["seed"] = seed; }
        void add_output(const std::filesystem::path &path);

        void begin_stage(const std::string &name);
        void end_stage();

        /// Writes the document with status "running".
        void write_initial();
        /// Writes the document with the final status and exit code.
        void finalize(int exit_code, const std::string &message = {});

        const nlohmann::json &document() const { return doc_; }
        const std::filesystem::path &path() const { return path_; }

      private:
        void write() const;

        nlohmann::json doc_;
        std::filesystem::path path_;
        std::string stage_;
        std::chrono::steady_clock::time_point stage_start_;
    };

    /// Parses "a,b,c" or "start:stop:step"; values may carry a k/M/G suffix (bit/s).
    std::vector<double> parse_thresholds(const std::string &text);

    /// Entry point shared by the executable and the tests. Returns an ExitCode.
    int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
}
