// Copyright 2026 The hamxform Authors
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


#ifndef HAMXFORM_RUNNER_H
#define HAMXFORM_RUNNER_H

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hamxform/config.h"
#include "hamxform/propagation.h"
#include "json.hpp"

namespace hamxform {

struct Curve {
    /// File stem; written as <name>.csv.
    std::string name;
    std::vector<double> t;
    std::vector<double> values;
};

struct RunOptions {
    /// Workers for sweeps.
    std::size_t jobs = 1;
    /// Stored in the record; the only field allowed to differ between identical runs.
    std::string timestamp;
};

struct RunResult {
    nlohmann::json record;
    std::vector<Curve> curves;
    std::optional<PropagatorTrace> trace;
    bool pass = false;
};

RunResult run_experiment(const ExperimentConfig &config, const RunOptions &options = {});

/// Writes result.json, the CSV curves (header `t,value`) and the optional trace into `out_dir`.
void write_outputs(const RunResult &result, const ExperimentConfig &config, const std::filesystem::path &out_dir);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerdictFailed = 2;

}  // namespace hamxform

#endif
