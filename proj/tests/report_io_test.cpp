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


#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "lhv/errors.hpp"
#include "lhv/harness.hpp"
#include "lhv/report_io.hpp"
#include "test_util.hpp"

namespace lhv {
namespace {

std::string read_golden(const std::string& name) {
    std::ifstream in(std::string(LHVSIM_GOLDEN_DIR) + "/" + name, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<ExperimentReport> sample_reports() {
    std::mt19937_64 g(60);
    std::vector<ExperimentReport> out;
    for (ModelVariant v : kAllVariants) {
        for (Schedule s : {Schedule::FixedPair, Schedule::CycleQuadruple, Schedule::RandomQuadruple}) {
            ExperimentConfig c;
            c.variant = v;
            c.schedule = s;
            c.n_trials = 1 + g() % 3000;
            c.seed = g();
            c.quad = v == ModelVariant::PlanarSteiner ? testing::random_planar_quadruple(g) : testing::random_quadruple(g);
            out.push_back(run_experiment(c, {2}));
        }
    }
    return out;
}

TEST(ReportIo, JsonRoundTripIsExact) {
    for (const ExperimentReport& r : sample_reports()) {
        const std::string text = export_report(r, ExportFormat::Json);
        const ExperimentReport back = import_report(text, ExportFormat::Json);
        EXPECT_EQ(back, r);
        EXPECT_EQ(export_report(back, ExportFormat::Json), text);
        EXPECT_EQ(import_report(text), r);
    }
}

TEST(ReportIo, CsvRoundTripIsExact) {
    for (const ExperimentReport& r : sample_reports()) {
        const std::string text = export_report(r, ExportFormat::Csv);
        const ExperimentReport back = import_report(text, ExportFormat::Csv);
        EXPECT_EQ(back, r);
        EXPECT_EQ(export_report(back, ExportFormat::Csv), text);
        EXPECT_EQ(import_report(text), r);
    }
}

TEST(ReportIo, EmptyCountsGiveZeroRows) {
    ExperimentConfig c;
    const ExperimentReport empty = make_report(c, CountsTable{});
    const std::string csv = export_report(empty, ExportFormat::Csv);
    std::istringstream lines(csv);
    std::string line;
    int data_rows = 0;
    bool header_seen = false;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            EXPECT_EQ(line, "pair,trials,pp,pm,mp,mm,alice_plus,alice_minus,bob_plus,bob_minus,neither,E,sigma");
            header_seen = true;
            continue;
        }
        ++data_rows;
    }
    EXPECT_TRUE(header_seen);
    EXPECT_EQ(data_rows, 0);
    EXPECT_EQ(import_report(csv), empty);

    const std::string json = export_report(empty, ExportFormat::Json);
    EXPECT_NE(json.find("\"pairs\": []"), std::string::npos) << json;
    EXPECT_EQ(import_report(json), empty);
}

TEST(ReportIo, RejectsMalformedInput) {
    EXPECT_THROW(import_report("{}", ExportFormat::Json), FormatError);
    EXPECT_THROW(import_report("not json at all {", ExportFormat::Json), FormatError);
    EXPECT_THROW(import_report("pair,trials\nab,1\n", ExportFormat::Csv), FormatError);
    ExperimentConfig c;
    c.n_trials = 10;
    std::string json = export_report(run_experiment(c), ExportFormat::Json);
    const auto pos = json.find("\"version\": 1");
    ASSERT_NE(pos, std::string::npos);
    json.replace(pos, 12, "\"version\": 9");
    EXPECT_THROW(import_report(json), FormatError);
    // Coincidences exceeding singles are inconsistent.
    std::string csv = export_report(run_experiment(c), ExportFormat::Csv);
    const auto row = csv.find("\nab,10,");
    ASSERT_NE(row, std::string::npos);
    csv.replace(row, 7, "\nab,1,");
    EXPECT_THROW(import_report(csv), FormatError);
}

TEST(ReportIo, UnsupportedFormatTag) {
    EXPECT_FALSE(parse_format("xml"));
    EXPECT_EQ(parse_format("csv"), ExportFormat::Csv);
    EXPECT_EQ(parse_format("json"), ExportFormat::Json);
    EXPECT_THROW(export_report(ExperimentReport{}, static_cast<ExportFormat>(9)), ConfigError);
}

TEST(ReportIo, ByteIdenticalAcrossBatches) {
    ExperimentConfig c;
    c.variant = ModelVariant::IndependentDetectors;
    c.schedule = Schedule::RandomQuadruple;
    c.n_trials = 30'000;
    c.seed = 61;
    const std::string ref = export_report(run_experiment(c, {1}), ExportFormat::Json);
    EXPECT_EQ(export_report(run_experiment(c, {2}), ExportFormat::Json), ref);
    EXPECT_EQ(export_report(run_experiment(c, {8}), ExportFormat::Json), ref);
}

TEST(ReportIo, ScanCsvMatchesGolden) {
    const ScanResult scan = scan_correlation(ModelVariant::NoLoophole, uniform_theta_grid(5), 1000, 7);
    EXPECT_EQ(export_scan(scan, ExportFormat::Csv), read_golden("scan_no_loophole.csv"));
    const ScanResult sym = scan_correlation(ModelVariant::Symmetric, uniform_theta_grid(5), 1000, 7);
    EXPECT_EQ(export_scan(sym, ExportFormat::Csv), read_golden("scan_symmetric.csv"));
}

TEST(ReportIo, ScanJsonHasAllCurves) {
    const ScanResult scan = scan_correlation(ModelVariant::Symmetric, uniform_theta_grid(3), 100, 7);
    const std::string json = export_scan(scan, ExportFormat::Json);
    for (const char* key : {"\"theta\"", "\"E_model\"", "\"sigma\"", "\"E_quantum\"", "\"E_linear\"", "\"detected\""}) {
        EXPECT_NE(json.find(key), std::string::npos) << key;
    }
}

TEST(ConfigJson, RoundTripAndPartialOverride) {
    std::mt19937_64 g(62);
    ExperimentConfig c;
    c.variant = ModelVariant::Asymmetric;
    c.schedule = Schedule::RandomQuadruple;
    c.n_trials = 777;
    c.seed = 0xdeadbeefcafeULL;
    c.quad = testing::random_quadruple(g);
    EXPECT_EQ(config_from_json(config_to_json(c)), c);

    ExperimentConfig defaults;
    defaults.n_trials = 5;
    const ExperimentConfig partial = config_from_json(R"({"variant": "independent"})", defaults);
    EXPECT_EQ(partial.variant, ModelVariant::IndependentDetectors);
    EXPECT_EQ(partial.n_trials, 5u);
    EXPECT_THROW(config_from_json(R"({"variant": "quantum"})"), FormatError);
    EXPECT_THROW(config_from_json(R"({"n_trials": "many"})"), FormatError);
    EXPECT_THROW(config_from_json("[1, 2"), FormatError);
}

}  // namespace
}  // namespace lhv
