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

#include "hamxform/config.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <iomanip>
#include <sstream>

namespace hamxform {

using nlohmann::json;

namespace {

using Range = ParamSpec::Range;

ParamSpec number(std::string name, json def, std::string what, Range range = Range::Any, bool nullable = false) {
    return ParamSpec{std::move(name), ParamType::Number, std::move(def), std::move(what), nullable, range, {}};
}

ParamSpec integer(std::string name, json def, std::string what, Range range = Range::Positive, bool nullable = false) {
    return ParamSpec{std::move(name), ParamType::Integer, std::move(def), std::move(what), nullable, range, {}};
}

ParamSpec choice(std::string name, std::string def, std::string what, std::vector<std::string> choices) {
    return ParamSpec{std::move(name), ParamType::String, def, std::move(what), false, Range::Any, std::move(choices)};
}

ParamSpec flag(std::string name, bool def, std::string what) {
    return ParamSpec{std::move(name), ParamType::Bool, def, std::move(what), false, Range::Any, {}};
}

std::vector<ParamSpec> output_params() {
    return {
        flag("write_curves", true, "write CSV curves next to result.json"),
        flag("export_trace", false, "write the fast propagator trace as text"),
    };
}

std::vector<ParamSpec> annealing_params(double runtime, long long steps) {
    return {
        number("gamma0", nullptr, "initial transverse field; null selects 2 max(|h|, |J|, 1)", Range::Positive, true),
        choice("schedule", "linear", "shape of Gamma(t) from gamma0 to 0", {"linear", "cosine"}),
        number("t_end", runtime, "annealing time T", Range::Positive),
        integer("n_steps", steps, "integration steps over [0, T]"),
        choice("initial", "ground", "initial state: exact ground state of h(0) or |->^n", {"ground", "minus"}),
        flag("fast_counterpart", true, "also run the fast counterpart with the correction gate"),
        number("phi_cycles", 10.0, "frame phase phi(t) = 2 pi phi_cycles t / T", Range::NonNegative),
        number("fidelity_tolerance", 1e-6, "allowed infidelity of the two-gate realization", Range::Positive),
        number("min_success", nullptr, "required success probability; null for no verdict", Range::NonNegative, true),
        integer("sweep_doublings", 0, "runtime doublings starting at t_end (0: no sweep)", Range::NonNegative),
        number("sweep_dt", 1e-2, "step size of the sweep runs", Range::Positive),
        number("sweep_threshold", 0.9, "success probability that marks an adequate runtime", Range::NonNegative),
    };
}

std::vector<ExperimentKind> build_kinds() {
    std::vector<ExperimentKind> kinds;

    ExperimentKind nmr{"nmr", "driven qubit: hidden adiabaticity in the rotating frame and two-gate realization", {}};
    nmr.params = {
        number("omega0", 1.0, "qubit splitting omega0"),
        number("omega", 2.0, "drive frequency omega (detuning Omega = omega - omega0)"),
        number("g", 25.0, "drive strength g", Range::Positive),
        number("t_end", nullptr, "final time T; null selects pi / (2 |Omega|)", Range::Positive, true),
        integer("n_steps", nullptr, "integration steps; null selects round(T / 1e-3)", Range::Positive, true),
        number("min_fidelity", 0.999, "required minimum adiabatic fidelity", Range::NonNegative),
        number("gate_tolerance", 1e-8, "allowed distance of the correction gate from its closed form", Range::Positive),
        number("fidelity_tolerance", 1e-6, "allowed infidelity of the two-gate realization", Range::Positive),
    };

    ExperimentKind grover{"grover", "Grover search by annealing, with its fast counterpart", {}};
    grover.params = {
        integer("n_qubits", 3, "number of qubits (1..10)"),
        integer("marked", 7, "index of the marked basis state", Range::NonNegative),
    };

    ExperimentKind ising{"ising", "Ising problem by annealing, with its fast counterpart", {}};
    ising.params = {
        ParamSpec{"problem_file", ParamType::String, nullptr, "edge-list file (`i h` / `i j J` lines); null: open chain",
                  true, Range::Any, {}},
        integer("n_qubits", 4, "chain length when no file is given"),
        number("field", 0.5, "uniform chain field h_i"),
        number("coupling", -1.0, "nearest-neighbour chain coupling J_{i,i+1}"),
    };
    for (auto *kind : {&grover, &ising}) {
        auto extra = annealing_params(40.0, 40000);
        kind->params.insert(kind->params.end(), extra.begin(), extra.end());
    }

    ExperimentKind verify{"verify-transform", "check h = S^dagger H S - i S^dagger dS/dt on a grid", {}};
    verify.params = {
        choice(
            "pair", "nmr-composed", "(H, h, S): self (S = I), nmr-closed-form, nmr-composed, aqc, mismatched (h = H + Z)",
            {"self", "nmr-closed-form", "nmr-composed", "aqc", "mismatched"}),
        number("omega0", 1.0, "NMR qubit splitting"),
        number("omega", 1.5, "NMR drive frequency"),
        number("g", 2.0, "NMR drive strength", Range::Positive),
        integer("n_qubits", 3, "Grover qubits for the aqc pair"),
        integer("marked", 7, "Grover marked state for the aqc pair", Range::NonNegative),
        number("phi_cycles", 10.0, "aqc frame phase phi(t) = 2 pi phi_cycles t / T", Range::NonNegative),
        number("t_end", 10.0, "final time", Range::Positive),
        integer("n_steps", 10000, "grid steps"),
    };

    ExperimentKind rescale{"rescale", "runtime rescaling H = (T'/T) h in scaling time tau = t/T", {}};
    rescale.params = {
        choice("problem", "grover", "grover annealing, or the resonant NMR drive with its closed form", {"grover", "nmr"}),
        integer("n_qubits", 3, "Grover qubits"),
        integer("marked", 7, "Grover marked state", Range::NonNegative),
        number("gamma0", 2.0, "Grover initial transverse field", Range::Positive),
        number("drive_area", 4.0, "NMR drive area A = g T = g' T'", Range::Positive),
        number("fast_time", 1.0, "fast characteristic time T", Range::Positive),
        number("slow_time", 100.0, "slow characteristic time T'", Range::Positive),
        integer("n_steps", 10000, "tau grid steps over [0, 1]"),
        integer("stride", 100, "store every stride-th node"),
        number("distance_tolerance", 1e-8, "allowed phase-aligned distance", Range::Positive),
    };

    for (auto *kind : {&nmr, &grover, &ising, &verify, &rescale}) {
        auto extra = output_params();
        kind->params.insert(kind->params.end(), extra.begin(), extra.end());
        kinds.push_back(std::move(*kind));
    }
    return kinds;
}

std::string render(const json &value) {
    if (value.is_string()) {
        return value.get<std::string>();
    }
    return value.dump();
}

json check_value(const ParamSpec &spec, const json &value) {
    auto fail = [&](const std::string &why) -> ConfigError {
        return ConfigError("field '" + spec.name + "': " + why + " (got " + value.dump() + ")");
    };
    if (value.is_null()) {
        if (!spec.nullable) {
            throw fail("must not be null");
        }
        return value;
    }
    switch (spec.type) {
        case ParamType::Bool:
            if (!value.is_boolean()) {
                throw fail("expected true or false");
            }
            return value;
        case ParamType::String:
            if (!value.is_string()) {
                throw fail("expected a string");
            }
            if (!spec.choices.empty() &&
                std::find(spec.choices.begin(), spec.choices.end(), value.get<std::string>()) == spec.choices.end()) {
                std::string allowed;
                for (const auto &c : spec.choices) {
                    allowed += (allowed.empty() ? "" : ", ") + c;
                }
                throw fail("expected one of " + allowed);
            }
            return value;
        case ParamType::Integer: {
            if (!value.is_number_integer()) {
                if (value.is_number_float() && std::nearbyint(value.get<double>()) == value.get<double>() &&
                    std::abs(value.get<double>()) < 9e15) {
                    return check_value(spec, json(static_cast<long long>(value.get<double>())));
                }
                throw fail("expected an integer");
            }
            auto v = value.get<long long>();
            if (spec.range == Range::Positive && v <= 0) {
                throw fail("must be positive");
            }
            if (spec.range == Range::NonNegative && v < 0) {
                throw fail("must be non-negative");
            }
            return json(v);
        }
        case ParamType::Number: {
            if (!value.is_number()) {
                throw fail("expected a number");
            }
            double v = value.get<double>();
            if (!std::isfinite(v)) {
                throw fail("must be finite");
            }
            if (spec.range == Range::Positive && !(v > 0)) {
                throw fail("must be positive");
            }
            if (spec.range == Range::NonNegative && !(v >= 0)) {
                throw fail("must be non-negative");
            }
            return json(v);
        }
    }
    return value;
}

}  // namespace

std::string ParamSpec::type_name() const {
    std::string base;
    switch (type) {
        case ParamType::Number:
            base = "number";
            break;
        case ParamType::Integer:
            base = "integer";
            break;
        case ParamType::String:
            base = "string";
            break;
        case ParamType::Bool:
            base = "bool";
            break;
    }
    return nullable ? base + "|null" : base;
}

const std::vector<ExperimentKind> &experiment_kinds() {
    static const std::vector<ExperimentKind> kinds = build_kinds();
    return kinds;
}

const ExperimentKind &experiment_kind(std::string_view name) {
    for (const auto &kind : experiment_kinds()) {
        if (kind.name == name) {
            return kind;
        }
    }
    std::string known;
    for (const auto &kind : experiment_kinds()) {
        known += (known.empty() ? "" : ", ") + kind.name;
    }
    throw ConfigError("field 'experiment': unknown kind '" + std::string(name) + "' (known: " + known + ")");
}

ExperimentConfig ExperimentConfig::from_json(const json &document) {
    if (!document.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    auto kind_it = document.find("experiment");
    if (kind_it == document.end()) {
        throw ConfigError("field 'experiment': missing");
    }
    if (!kind_it->is_string()) {
        throw ConfigError("field 'experiment': expected a string");
    }
    const ExperimentKind &kind = experiment_kind(kind_it->get<std::string>());
    json params = json::object();
    for (const auto &[key, value] : document.items()) {
        if (key == "experiment") {
            continue;
        }
        auto spec = std::find_if(kind.params.begin(), kind.params.end(), [&](const ParamSpec &p) { return p.name == key; });
        if (spec == kind.params.end()) {
            throw ConfigError("field '" + key + "': unknown parameter for experiment '" + kind.name + "'");
        }
        params[key] = check_value(*spec, value);
    }
    for (const auto &spec : kind.params) {
        if (!params.contains(spec.name)) {
            params[spec.name] = spec.default_value;
        }
    }
    return ExperimentConfig(kind.name, std::move(params));
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return from_json(document);
}

ExperimentConfig ExperimentConfig::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::optional<ExperimentConfig> parsed;
    try {
        parsed.emplace(parse(buffer.str()));
    } catch (const ConfigError &e) {
        throw ConfigError(path + ": " + e.what());
    }
    ExperimentConfig config = std::move(*parsed);
    // Relative data paths are taken from the config file's directory.
    auto file = config.params_.find("problem_file");
    if (file != config.params_.end() && file->is_string()) {
        std::filesystem::path data(file->get<std::string>());
        if (data.is_relative()) {
            *file = (std::filesystem::path(path).parent_path() / data).lexically_normal().string();
        }
    }
    return config;
}

ExperimentConfig ExperimentConfig::defaults(std::string_view kind) {
    return from_json(json{{"experiment", std::string(kind)}});
}

ExperimentConfig ExperimentConfig::with_overrides(const std::vector<std::string> &assignments) const {
    json document = to_json();
    for (const auto &assignment : assignments) {
        auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("override '" + assignment + "': expected key=value");
        }
        std::string key = assignment.substr(0, eq);
        std::string text = assignment.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded()) {
            value = text;
        }
        if (key == "experiment" && value != document["experiment"]) {
            // Parameters of the previous kind do not carry over.
            document = json{{"experiment", value}};
            continue;
        }
        if (key != "experiment" && !document.contains(key)) {
            throw ConfigError("field '" + key + "': unknown parameter for experiment '" + kind_ + "'");
        }
        document[key] = value;
    }
    return from_json(document);
}

json ExperimentConfig::to_json() const {
    json out = params_;
    out["experiment"] = kind_;
    return out;
}

std::string ExperimentConfig::serialize() const { return to_json().dump(2) + "\n"; }

const json &ExperimentConfig::value(std::string_view key) const {
    auto it = params_.find(std::string(key));
    if (it == params_.end()) {
        throw std::logic_error("config of kind '" + kind_ + "' has no parameter '" + std::string(key) + "'");
    }
    return *it;
}

double ExperimentConfig::number(std::string_view key) const { return value(key).get<double>(); }
long long ExperimentConfig::integer(std::string_view key) const { return value(key).get<long long>(); }
std::string ExperimentConfig::string(std::string_view key) const { return value(key).get<std::string>(); }
bool ExperimentConfig::boolean(std::string_view key) const { return value(key).get<bool>(); }
bool ExperimentConfig::is_null(std::string_view key) const { return value(key).is_null(); }

std::string describe_kind(const ExperimentKind &kind) {
    std::size_t name_width = 4, type_width = 4, default_width = 7;
    for (const auto &p : kind.params) {
        name_width = std::max(name_width, p.name.size());
        type_width = std::max(type_width, p.type_name().size());
        default_width = std::max(default_width, render(p.default_value).size());
    }
    std::ostringstream out;
    out << kind.name << ": " << kind.summary << "\n\n";
    out << std::left << "  " << std::setw(static_cast<int>(name_width)) << "name" << "  "
        << std::setw(static_cast<int>(type_width)) << "type" << "  " << std::setw(static_cast<int>(default_width))
        << "default" << "  description\n";
    for (const auto &p : kind.params) {
        std::string description = p.description;
        if (!p.choices.empty()) {
            std::string options;
            for (const auto &c : p.choices) {
                options += (options.empty() ? "" : "|") + c;
            }
            description += " [" + options + "]";
        }
        out << "  " << std::setw(static_cast<int>(name_width)) << p.name << "  "
            << std::setw(static_cast<int>(type_width)) << p.type_name() << "  "
            << std::setw(static_cast<int>(default_width)) << render(p.default_value) << "  " << description << "\n";
    }
    return out.str();
}

std::string describe_kinds() {
    std::size_t width = 0;
    for (const auto &kind : experiment_kinds()) {
        width = std::max(width, kind.name.size());
    }
    std::ostringstream out;
    for (const auto &kind : experiment_kinds()) {
        out << std::left << std::setw(static_cast<int>(width)) << kind.name << "  " << kind.summary << "\n";
    }
    return out.str();
}

}  // namespace hamxform
