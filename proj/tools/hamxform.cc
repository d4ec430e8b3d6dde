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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hamxform/config.h"
#include "hamxform/runner.h"

namespace {

int run_command(
    const std::string &config_path, const std::string &kind, const std::vector<std::string> &overrides,
    const std::string &out_dir, std::size_t jobs) {
    using namespace hamxform;
    ExperimentConfig config = config_path.empty() ? ExperimentConfig::defaults(kind) : ExperimentConfig::load(config_path);
    config = config.with_overrides(overrides);
    RunResult result = run_experiment(config, RunOptions{jobs, utc_timestamp()});
    write_outputs(result, config, out_dir);
    for (const auto &v : result.record["verdicts"]) {
        std::cout << (v["pass"].get<bool>() ? "PASS " : "FAIL ") << v["name"].get<std::string>() << " = "
                  << v["value"].dump() << " " << v["comparison"].get<std::string>() << " " << v["threshold"].dump()
                  << "\n";
    }
    std::cout << config.kind() << ": " << (result.pass ? "PASS" : "FAIL") << " (" << out_dir << "/result.json)\n";
    return result.pass ? kExitPass : kExitVerdictFailed;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"hamxform: frame transformations of time-dependent Hamiltonians"};
    app.require_subcommand(1);

    std::string config_path, kind, out_dir = "hamxform-out";
    std::vector<std::string> overrides;
    std::size_t jobs = 1;
    auto *run = app.add_subcommand("run", "run an experiment and write <out>/result.json");
    auto *config_opt = run->add_option("--config", config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
    run->add_option("--experiment", kind, "run the defaults of this kind instead of a config file")
        ->excludes(config_opt);
    run->add_option("--set", overrides, "override a parameter, key=value (repeatable)")->allow_extra_args(false);
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_option("--jobs", jobs, "workers for sweeps")->check(CLI::PositiveNumber)->capture_default_str();

    std::string list_kind;
    auto *list = app.add_subcommand("list", "list experiment kinds, or the parameter table of one kind");
    list->add_option("kind", list_kind, "experiment kind");

    app.add_subcommand("version", "print the library version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return hamxform::kExitUsage;
    }

    try {
        if (run->parsed()) {
            if (config_path.empty() && kind.empty()) {
                std::cerr << "error: run needs --config or --experiment\n\n" << run->help();
                return hamxform::kExitUsage;
            }
            return run_command(config_path, kind, overrides, out_dir, jobs);
        }
        if (list->parsed()) {
            if (list_kind.empty()) {
                std::cout << hamxform::describe_kinds();
            } else {
                std::cout << hamxform::describe_kind(hamxform::experiment_kind(list_kind));
            }
            return hamxform::kExitPass;
        }
        std::cout << "hamxform " << HAMXFORM_VERSION << "\n";
        return hamxform::kExitPass;
    } catch (const hamxform::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return hamxform::kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return hamxform::kExitUsage;
    }
}
