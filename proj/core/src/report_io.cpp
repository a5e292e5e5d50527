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

#include "lhv/report_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "lhv/errors.hpp"

namespace lhv {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kReportSchema = "lhvsim.report";
constexpr std::string_view kScanSchema = "lhvsim.scan";
constexpr std::string_view kCsvMagic = "# lhvsim-report v1";
constexpr std::string_view kCsvColumns =
    "pair,trials,pp,pm,mp,mm,alice_plus,alice_minus,bob_plus,bob_minus,neither,E,sigma";

Json vec_json(const UnitVector3& v) { return Json::array({v.x(), v.y(), v.z()}); }

UnitVector3 vec_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 3) throw FormatError("setting must be a 3-element array");
    return UnitVector3::from_components(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Json config_json(const ExperimentConfig& c) {
    Json j;
    j["variant"] = std::string(to_string(c.variant));
    j["schedule"] = std::string(to_string(c.schedule));
    j["n_trials"] = c.n_trials;
    j["seed"] = c.seed;
    j["settings"] = {{"a", vec_json(c.quad.a)},
                     {"a_prime", vec_json(c.quad.a_prime)},
                     {"b", vec_json(c.quad.b)},
                     {"b_prime", vec_json(c.quad.b_prime)}};
    return j;
}

ExperimentConfig config_from(const Json& j, ExperimentConfig c) {
    if (!j.is_object()) throw FormatError("config must be a JSON object");
    if (j.contains("variant")) {
        const auto v = parse_variant(j.at("variant").get<std::string>());
        if (!v) throw FormatError("unknown variant '" + j.at("variant").get<std::string>() + "'");
        c.variant = *v;
    }
    if (j.contains("schedule")) {
        const auto s = parse_schedule(j.at("schedule").get<std::string>());
        if (!s) throw FormatError("unknown schedule '" + j.at("schedule").get<std::string>() + "'");
        c.schedule = *s;
    }
    if (j.contains("n_trials")) c.n_trials = j.at("n_trials").get<std::uint64_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("settings")) {
        const Json& s = j.at("settings");
        if (s.contains("a")) c.quad.a = vec_from_json(s.at("a"));
        if (s.contains("a_prime")) c.quad.a_prime = vec_from_json(s.at("a_prime"));
        if (s.contains("b")) c.quad.b = vec_from_json(s.at("b"));
        if (s.contains("b_prime")) c.quad.b_prime = vec_from_json(s.at("b_prime"));
    }
    return c;
}

int pair_from_label(std::string_view label) {
    for (int k = 0; k < 4; ++k) {
        if (kPairLabels[k] == label) return k;
    }
    throw FormatError("unknown setting pair '" + std::string(label) + "'");
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string export_json(const ExperimentReport& r) {
    Json j;
    j["schema"] = kReportSchema;
    j["version"] = kReportSchemaVersion;
    j["config"] = config_json(r.config);
    Json pairs = Json::array();
    for (int k = 0; k < 4; ++k) {
        const auto& p = r.counts.pairs[k];
        if (p.trials == 0) continue;
        pairs.push_back({{"pair", kPairLabels[k]},
                         {"trials", p.trials},
                         {"pp", p.pp},
                         {"pm", p.pm},
                         {"mp", p.mp},
                         {"mm", p.mm},
                         {"alice_plus", p.alice_plus},
                         {"alice_minus", p.alice_minus},
                         {"bob_plus", p.bob_plus},
                         {"bob_minus", p.bob_minus},
                         {"neither", p.neither},
                         {"E", optional_json(r.pairs[k].correlation)},
                         {"sigma", optional_json(r.pairs[k].sigma)}});
    }
    j["pairs"] = std::move(pairs);
    if (r.chsh) {
        j["chsh"] = {{"E", r.chsh->correlations},
                     {"S", r.chsh->s},
                     {"sigma", r.chsh->sigma},
                     {"violated", r.chsh->violated}};
    } else {
        j["chsh"] = nullptr;
    }
    if (r.ch) {
        j["ch"] = {{"orientation", std::string(to_string(r.ch->orientation))},
                   {"lhs", r.ch->lhs},
                   {"rhs", r.ch->rhs},
                   {"sigma", r.ch->sigma},
                   {"violated", r.ch->violated}};
    } else {
        j["ch"] = nullptr;
    }
    const auto& d = r.detection;
    j["detection"] = {{"alice_rate", d.alice_rate},
                      {"alice_sigma", d.alice_sigma},
                      {"bob_rate", d.bob_rate},
                      {"bob_sigma", d.bob_sigma},
                      {"joint_rate", d.joint_rate},
                      {"joint_sigma", d.joint_sigma},
                      {"factorization_residual", d.factorization_residual},
                      {"residual_sigma", d.residual_sigma},
                      {"p_detections", d.outcome_multiplicity},
                      {"p_detections_sigma", d.outcome_multiplicity_sigma},
                      {"relevant_efficiency", optional_json(d.relevant_efficiency)},
                      {"relevant_efficiency_sigma", optional_json(d.relevant_efficiency_sigma)}};
    return j.dump(2) + "\n";
}

ExperimentReport import_json(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (j.value("schema", std::string()) != kReportSchema) throw FormatError("not an lhvsim report");
        if (j.value("version", -1) != kReportSchemaVersion) throw FormatError("unsupported report version");
        const ExperimentConfig config = config_from(j.at("config"), {});
        CountsTable counts;
        for (const Json& p : j.at("pairs")) {
            auto& c = counts.pairs[pair_from_label(p.at("pair").get<std::string>())];
            c.trials = p.at("trials").get<std::uint64_t>();
            c.pp = p.at("pp").get<std::uint64_t>();
            c.pm = p.at("pm").get<std::uint64_t>();
            c.mp = p.at("mp").get<std::uint64_t>();
            c.mm = p.at("mm").get<std::uint64_t>();
            c.alice_plus = p.at("alice_plus").get<std::uint64_t>();
            c.alice_minus = p.at("alice_minus").get<std::uint64_t>();
            c.bob_plus = p.at("bob_plus").get<std::uint64_t>();
            c.bob_minus = p.at("bob_minus").get<std::uint64_t>();
            c.neither = p.at("neither").get<std::uint64_t>();
        }
        validate_counts(counts);
        return make_report(config, counts);
    } catch (const Json::exception& e) {
        throw FormatError(std::string("malformed report: ") + e.what());
    }
}

std::string csv_vec(const UnitVector3& v) {
    return format_double(v.x()) + "," + format_double(v.y()) + "," + format_double(v.z());
}

std::string export_csv(const ExperimentReport& r) {
    std::string out;
    const auto& c = r.config;
    out += kCsvMagic;
    out += "\n# variant=" + std::string(to_string(c.variant)) + "\n";
    out += "# schedule=" + std::string(to_string(c.schedule)) + "\n";
    out += "# n_trials=" + std::to_string(c.n_trials) + "\n";
    out += "# seed=" + std::to_string(c.seed) + "\n";
    out += "# a=" + csv_vec(c.quad.a) + "\n";
    out += "# a_prime=" + csv_vec(c.quad.a_prime) + "\n";
    out += "# b=" + csv_vec(c.quad.b) + "\n";
    out += "# b_prime=" + csv_vec(c.quad.b_prime) + "\n";
    out += kCsvColumns;
    out += "\n";
    for (int k = 0; k < 4; ++k) {
        const auto& p = r.counts.pairs[k];
        if (p.trials == 0) continue;
        out += std::string(kPairLabels[k]);
        for (std::uint64_t v : {p.trials, p.pp, p.pm, p.mp, p.mm, p.alice_plus, p.alice_minus, p.bob_plus,
                                p.bob_minus, p.neither}) {
            out += "," + std::to_string(v);
        }
        out += "," + (r.pairs[k].correlation ? format_double(*r.pairs[k].correlation) : std::string());
        out += "," + (r.pairs[k].sigma ? format_double(*r.pairs[k].sigma) : std::string());
        out += "\n";
    }
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view s) {
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw FormatError("invalid number '" + std::string(s) + "'");
    }
    return value;
}

UnitVector3 csv_vec_from(std::string_view s) {
    const auto parts = split(s, ',');
    if (parts.size() != 3) throw FormatError("setting must have three components");
    return UnitVector3::from_components(parse_number<double>(parts[0]), parse_number<double>(parts[1]),
                                        parse_number<double>(parts[2]));
}

ExperimentReport import_csv(std::string_view text) {
    ExperimentConfig config;
    CountsTable counts;
    bool magic = false, columns = false;
    for (std::string_view line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (line == kCsvMagic) {
                magic = true;
                continue;
            }
            std::string_view body = line.substr(1);
            while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            const std::size_t eq = body.find('=');
            if (eq == std::string_view::npos) continue;
            const std::string_view key = body.substr(0, eq);
            const std::string_view value = body.substr(eq + 1);
            if (key == "variant") {
                const auto v = parse_variant(value);
                if (!v) throw FormatError("unknown variant '" + std::string(value) + "'");
                config.variant = *v;
            } else if (key == "schedule") {
                const auto s = parse_schedule(value);
                if (!s) throw FormatError("unknown schedule '" + std::string(value) + "'");
                config.schedule = *s;
            } else if (key == "n_trials") {
                config.n_trials = parse_number<std::uint64_t>(value);
            } else if (key == "seed") {
                config.seed = parse_number<std::uint64_t>(value);
            } else if (key == "a") {
                config.quad.a = csv_vec_from(value);
            } else if (key == "a_prime") {
                config.quad.a_prime = csv_vec_from(value);
            } else if (key == "b") {
                config.quad.b = csv_vec_from(value);
            } else if (key == "b_prime") {
                config.quad.b_prime = csv_vec_from(value);
            }
            continue;
        }
        if (line == kCsvColumns) {
            columns = true;
            continue;
        }
        if (!columns) throw FormatError("CSV rows before the column header");
        const auto f = split(line, ',');
        if (f.size() != 13) throw FormatError("CSV row must have 13 fields");
        auto& c = counts.pairs[pair_from_label(f[0])];
        std::uint64_t* fields[] = {&c.trials,     &c.pp,       &c.pm,        &c.mp,      &c.mm,
                                   &c.alice_plus, &c.alice_minus, &c.bob_plus, &c.bob_minus, &c.neither};
        for (std::size_t i = 0; i < 10; ++i) *fields[i] = parse_number<std::uint64_t>(f[i + 1]);
    }
    if (!magic) throw FormatError("missing '# lhvsim-report v1' header");
    if (!columns) throw FormatError("missing CSV column header");
    validate_counts(counts);
    return make_report(config, counts);
}

}  // namespace

std::optional<ExportFormat> parse_format(std::string_view name) {
    if (name == "csv") return ExportFormat::Csv;
    if (name == "json") return ExportFormat::Json;
    return std::nullopt;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string export_report(const ExperimentReport& report, ExportFormat format) {
    switch (format) {
        case ExportFormat::Json:
            return export_json(report);
        case ExportFormat::Csv:
            return export_csv(report);
    }
    throw ConfigError("unsupported export format");
}

ExperimentReport import_report(std::string_view text, ExportFormat format) {
    switch (format) {
        case ExportFormat::Json:
            return import_json(text);
        case ExportFormat::Csv:
            return import_csv(text);
    }
    throw ConfigError("unsupported import format");
}

ExperimentReport import_report(std::string_view text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    const bool json = first != std::string_view::npos && text[first] == '{';
    return import_report(text, json ? ExportFormat::Json : ExportFormat::Csv);
}

std::string export_scan(const ScanResult& scan, ExportFormat format) {
    if (format == ExportFormat::Csv) {
        std::string out = "theta,E_model,sigma,E_quantum,E_linear,detected\n";
        for (std::size_t i = 0; i < scan.theta.size(); ++i) {
            out += format_double(scan.theta[i]) + "," + format_double(scan.e_model[i]) + "," +
                   format_double(scan.sigma[i]) + "," + format_double(scan.e_quantum[i]) + "," +
                   format_double(scan.e_linear[i]) + "," + std::to_string(scan.detected[i]) + "\n";
        }
        return out;
    }
    Json j;
    j["schema"] = kScanSchema;
    j["version"] = kReportSchemaVersion;
    j["variant"] = std::string(to_string(scan.variant));
    Json points = Json::array();
    auto num = [](double v) { return std::isnan(v) ? Json(nullptr) : Json(v); };
    for (std::size_t i = 0; i < scan.theta.size(); ++i) {
        points.push_back({{"theta", scan.theta[i]},
                          {"E_model", num(scan.e_model[i])},
                          {"sigma", num(scan.sigma[i])},
                          {"E_quantum", scan.e_quantum[i]},
                          {"E_linear", scan.e_linear[i]},
                          {"detected", scan.detected[i]}});
    }
    j["points"] = std::move(points);
    return j.dump(2) + "\n";
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2) + "\n"; }

ExperimentConfig config_from_json(std::string_view text, const ExperimentConfig& defaults) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (j.is_object() && j.contains("schema") && j.contains("config")) return config_from(j.at("config"), defaults);
        return config_from(j, defaults);
    } catch (const Json::exception& e) {
        throw FormatError(std::string("malformed config: ") + e.what());
    }
}

}  // namespace lhv
