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


#ifndef HAMXFORM_CONFIG_H
#define HAMXFORM_CONFIG_H

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hamxform {

/// Thrown for malformed configs and bad overrides; the message names the field or line.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class ParamType { Number, Integer, String, Bool };

struct ParamSpec {
    std::string name;
    ParamType type;
    nlohmann::json default_value;
    std::string description;
    bool nullable = false;
    /// Numeric constraint: values must be > 0 (Positive) or >= 0 (NonNegative).
    enum class Range { Any, Positive, NonNegative } range = Range::Any;
    /// Allowed values for string parameters (empty: any string).
    std::vector<std::string> choices;

    /// "number", "integer|null", ...
    std::string type_name() const;
};

struct ExperimentKind {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;
};

/// nmr, grover, ising, verify-transform, rescale.
const std::vector<ExperimentKind> &experiment_kinds();
/// Throws ConfigError for unknown kinds.
const ExperimentKind &experiment_kind(std::string_view name);

/// A validated experiment description: the kind and every parameter of that kind,
/// with defaults filled in.
class ExperimentConfig {
   public:
    /// Validates a JSON object {"experiment": kind, <param>: value, ...}.
    static ExperimentConfig from_json(const nlohmann::json &document);
    static ExperimentConfig parse(std::string_view text);
    static ExperimentConfig load(const std::string &path);
    /// Defaults of a kind.
    static ExperimentConfig defaults(std::string_view kind);

    /// Applies `key=value` overrides. Values are read as JSON when possible and as
    /// plain strings otherwise. Returns a new validated config.
    ExperimentConfig with_overrides(const std::vector<std::string> &assignments) const;

    const std::string &kind() const { return kind_; }
    /// Canonical form: {"experiment": kind, ...all parameters}.
    nlohmann::json to_json() const;
    std::string serialize() const;

    double number(std::string_view key) const;
    long long integer(std::string_view key) const;
    std::string string(std::string_view key) const;
    bool boolean(std::string_view key) const;
    bool is_null(std::string_view key) const;

    bool operator==(const ExperimentConfig &other) const { return to_json() == other.to_json(); }

   private:
    ExperimentConfig(std::string kind, nlohmann::json params) : kind_(std::move(kind)), params_(std::move(params)) {}
    const nlohmann::json &value(std::string_view key) const;

    std::string kind_;
    nlohmann::json params_;
};

/// Text table of a kind's parameters (name, type, default, description).
std::string describe_kind(const ExperimentKind &kind);
/// One line per kind.
std::string describe_kinds();

}  // namespace hamxform

#endif
