// Copyright 2026 The lhvsim Authors
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

#ifndef LHV_REPORT_IO_HPP
#define LHV_REPORT_IO_HPP

#include <optional>
#include <string>
#include <string_view>

#include "lhv/harness.hpp"

namespace lhv {

/// Report serialization.
///
/// JSON (schema "lhvsim.report", version 1):
///   { "schema", "version",
///     "config": { "variant", "schedule", "n_trials", "seed",
///                 "settings": { "a": [x,y,z], "a_prime", "b", "b_prime" } },
///     "pairs": [ { "pair": "ab", "trials", "pp", "pm", "mp", "mm",
///                  "alice_plus", "alice_minus", "bob_plus", "bob_minus",
///                  "neither", "E", "sigma" } ],          // pairs with trials > 0
///     "chsh": { "E": [4], "S", "sigma", "violated" } | null,
///     "ch": { "orientation", "lhs", "rhs", "sigma", "violated" } | null,
///     "detection": { ... } }
///
/// CSV (version 1): '#'-prefixed header lines carry the config
/// ("# lhvsim-report v1", "# variant=...", "# schedule=...", "# n_trials=...",
/// "# seed=...", "# a=x,y,z", "# a_prime=...", "# b=...", "# b_prime=..."),
/// then the column line
///   pair,trials,pp,pm,mp,mm,alice_plus,alice_minus,bob_plus,bob_minus,neither,E,sigma
/// and one row per setting pair with trials > 0. E and sigma are empty when a
/// pair has no coincidences.
///
/// Import reads config and counts only and rebuilds the rest with
/// make_report, so export(import(x)) == x byte for byte.
enum class ExportFormat : std::uint8_t { Csv, Json };

std::optional<ExportFormat> parse_format(std::string_view name);

inline constexpr int kReportSchemaVersion = 1;

std::string export_report(const ExperimentReport& report, ExportFormat format);

/// Throws FormatError on malformed input or schema/version mismatch.
ExperimentReport import_report(std::string_view text, ExportFormat format);

/// Guesses the format from the first non-blank character ('{' means JSON).
ExperimentReport import_report(std::string_view text);

/// CSV columns: theta,E_model,sigma,E_quantum,E_linear,detected.
/// JSON: { "schema": "lhvsim.scan", "version": 1, "variant", "points": [...] }.
std::string export_scan(const ScanResult& scan, ExportFormat format);

/// The "config" object of the JSON report, usable standalone as a config file.
std::string config_to_json(const ExperimentConfig& config);

/// Parses a config document (either a bare config object or a full report).
/// Missing fields keep the values of `defaults`. Throws FormatError.
ExperimentConfig config_from_json(std::string_view text, const ExperimentConfig& defaults = {});

/// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

}  // namespace lhv

#endif
