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

// lhvsim: command-line front end.
//
//   lhvsim simulate     run one experiment and print its report
//   lhvsim scan         correlation versus analyzer angle (model, linear, singlet)
//   lhvsim inequalities evaluate CHSH and CH on a stored report
//   lhvsim threshold    optimal CH efficiency threshold for singlet counts
//   lhvsim referee      collect a two-node session over TCP
//   lhvsim node         run Alice or Bob against a referee
//   lhvsim selftest     internal consistency checks
//
// Exit status: 0 success, 1 domain/runtime error, 2 usage error.
// Experiment parameters come from defaults, then --config (JSON), then flags.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lhv/errors.hpp"
#include "lhv/harness.hpp"
#include "lhv/inequalities.hpp"
#include "lhv/netdemo/session.hpp"
#include "lhv/quadrature.hpp"
#include "lhv/report_io.hpp"

namespace {

using namespace lhv;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentFlags {
    std::string config_file;
    std::string variant;
    std::string schedule;
    std::uint64_t n_trials = 0;
    std::uint64_t seed = 1;
    std::vector<double> angles_deg;
    unsigned threads = 1;
    std::string format = "json";
    std::string out;

    void add_to(CLI::App* cmd, bool with_output = true) {
        cmd->add_option("--config", config_file, "Config file (JSON; a report's config also works)");
        cmd->add_option("--variant", variant, "no-loophole | asymmetric | symmetric | independent | planar");
        cmd->add_option("--schedule", schedule, "fixed-pair | cycle-quadruple | random-quadruple");
        cmd->add_option("--n", n_trials, "Trials per setting pair");
        cmd->add_option("--seed", seed, "Session seed")->capture_default_str();
        cmd->add_option("--angles", angles_deg, "In-plane settings a,a',b,b' in degrees")
            ->delimiter(',')
            ->expected(4);
        cmd->add_option("--threads", threads, "Worker batches")->capture_default_str();
        if (with_output) {
            cmd->add_option("--format", format, "json | csv")->capture_default_str();
            cmd->add_option("--out", out, "Write the report here instead of stdout");
        }
    }

    ExperimentConfig resolve(const CLI::App* cmd) const {
        ExperimentConfig c;
        c.n_trials = 100000;
        if (!config_file.empty()) c = config_from_json(read_file(config_file), c);
        if (!variant.empty()) {
            const auto v = parse_variant(variant);
            if (!v) throw UsageError("unknown variant '" + variant + "'");
            c.variant = *v;
        }
        if (!schedule.empty()) {
            const auto s = parse_schedule(schedule);
            if (!s) throw UsageError("unknown schedule '" + schedule + "'");
            c.schedule = *s;
        }
        if (n_trials > 0) c.n_trials = n_trials;
        if (cmd->count("--seed") > 0 || config_file.empty()) c.seed = seed;
        if (!angles_deg.empty()) {
            c.quad = SettingQuadruple::planar(deg_to_rad(angles_deg[0]), deg_to_rad(angles_deg[1]),
                                              deg_to_rad(angles_deg[2]), deg_to_rad(angles_deg[3]));
        }
        c.validate();
        return c;
    }

    ExportFormat export_format() const {
        const auto f = parse_format(format);
        if (!f) throw UsageError("unknown format '" + format + "'");
        return *f;
    }

    static std::string read_file(const std::string& path) {
        if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
        std::ifstream in(path, std::ios::binary);
        if (!in) throw FormatError("cannot read '" + path + "'");
        return {std::istreambuf_iterator<char>(in), {}};
    }

    void emit(const std::string& text) const {
        if (out.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(out, std::ios::binary);
        if (!f) throw FormatError("cannot write '" + out + "'");
        f << text;
    }
};

std::string angle_of(const UnitVector3& v) {
    char buf[64];
    if (v.is_planar()) {
        std::snprintf(buf, sizeof buf, "%.6f deg", rad_to_deg(std::atan2(v.y(), v.x())));
    } else {
        std::snprintf(buf, sizeof buf, "(%.6f, %.6f, %.6f)", v.x(), v.y(), v.z());
    }
    return buf;
}

void print_inequalities(const ExperimentReport& r) {
    for (int k = 0; k < 4; ++k) {
        const auto& p = r.pairs[k];
        std::printf("E(%s) = ", std::string(kPairLabels[k]).c_str());
        if (p.correlation) {
            std::printf("%.6f +/- %.6f  (%llu coincidences)\n", *p.correlation, *p.sigma,
                        static_cast<unsigned long long>(r.counts.pairs[k].coincidences()));
        } else {
            std::printf("undefined (no coincidences)\n");
        }
    }
    if (r.chsh) {
        std::printf("CHSH S = %.6f +/- %.6f  |S| > 2: %s\n", r.chsh->s, r.chsh->sigma,
                    r.chsh->violated ? "violated" : "not violated");
    } else {
        std::printf("CHSH undefined (a setting pair has no coincidences)\n");
    }
    if (r.ch) {
        std::printf("CH (%s) lhs = %.3f  rhs = %.3f  lhs - rhs = %.3f +/- %.3f  %s\n",
                    std::string(to_string(r.ch->orientation)).c_str(), r.ch->lhs, r.ch->rhs, r.ch->margin(),
                    r.ch->sigma, r.ch->violated ? "violated" : "not violated");
    } else {
        std::printf("CH undefined (a setting pair has no trials)\n");
    }
}

int run_selftest() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::printf("%-48s %s\n", name, ok ? "PASS" : "FAIL");
        if (!ok) ++failures;
    };
    check("binary identity (16 tuples)", binary_identity_check());

    double worst = 0.0;
    for (double deg : {0.0, 30.0, 45.0, 90.0, 135.0, 180.0}) {
        const auto a = UnitVector3::from_planar_angle(0.0);
        const auto b = UnitVector3::from_planar_angle(deg_to_rad(deg));
        for (ModelVariant v : {ModelVariant::Asymmetric, ModelVariant::Symmetric,
                               ModelVariant::IndependentDetectors, ModelVariant::PlanarSteiner}) {
            worst = std::max(worst, std::abs(quadrature_correlation(v, a, b) + dot(a, b)));
        }
        worst = std::max(worst, std::abs(quadrature_correlation(ModelVariant::NoLoophole, a, b) -
                                          correlation_no_loophole(deg_to_rad(deg))));
    }
    check("quadrature vs closed-form correlations (1e-6)", worst < 1e-6);
    check("conditional density normalization (1e-9)",
          std::abs(quadrature_density_normalization(UnitVector3::from_spherical(0.7, 1.9)) - 1.0) < 1e-9);
    check("CH threshold at CHSH-optimal settings",
          std::abs(ch_threshold(SettingQuadruple::chsh_optimal()) - 2.0 / (1.0 + std::sqrt(2.0))) < 1e-12);
    check("relevant efficiency p = 1/2 gives 2/3", std::abs(relevant_efficiency(0.5) - 2.0 / 3.0) < 1e-15);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detection-loophole hidden-variable model of the singlet: simulation and Bell-inequality analysis"};
    app.require_subcommand(1);

    ExperimentFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "Run one experiment and print its report");
    sim_flags.add_to(simulate);

    std::string scan_variant = "symmetric";
    std::uint64_t scan_seed = 1, scan_n = 100000;
    int scan_points = 13;
    unsigned scan_threads = 1;
    std::string scan_format = "csv";
    auto* scan = app.add_subcommand("scan", "Correlation versus angle for a model variant");
    scan->add_option("--variant", scan_variant)->capture_default_str();
    scan->add_option("--seed", scan_seed)->capture_default_str();
    scan->add_option("--n", scan_n, "Trials per angle")->capture_default_str();
    scan->add_option("--points", scan_points, "Angles from 0 to 180 degrees inclusive")->capture_default_str();
    scan->add_option("--threads", scan_threads)->capture_default_str();
    scan->add_option("--format", scan_format, "csv | json")->capture_default_str();

    std::string counts_file;
    std::vector<double> ineq_angles;
    auto* inequalities = app.add_subcommand("inequalities", "Evaluate CHSH and CH on a stored report");
    inequalities->add_option("--counts", counts_file, "Report file (JSON or CSV), '-' for stdin")->required();
    inequalities->add_option("--angles", ineq_angles, "Override settings a,a',b,b' in degrees")
        ->delimiter(',')
        ->expected(4);

    bool full_sphere = false;
    auto* threshold = app.add_subcommand("threshold", "Minimal detector efficiency for a CH violation");
    threshold->add_flag("--full-sphere", full_sphere, "Search S^2 instead of the plane");

    ExperimentFlags ref_flags;
    std::string bind = "127.0.0.1:7878";
    std::uint64_t session_id = 1;
    int timeout_s = 60;
    auto* referee = app.add_subcommand("referee", "Collect a two-node session");
    referee->add_option("--bind", bind)->capture_default_str();
    referee->add_option("--session-id", session_id)->capture_default_str();
    referee->add_option("--timeout", timeout_s, "Seconds to wait for nodes")->capture_default_str();
    ref_flags.add_to(referee);

    std::string role_name, connect = "127.0.0.1:7878";
    auto* node = app.add_subcommand("node", "Run Alice or Bob against a referee");
    node->add_option("--role", role_name, "alice | bob")->required();
    node->add_option("--connect", connect)->capture_default_str();
    node->add_option("--timeout", timeout_s, "Seconds")->capture_default_str();

    auto* selftest = app.add_subcommand("selftest", "Internal consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*simulate) {
            const ExperimentConfig config = sim_flags.resolve(simulate);
            const auto report = run_experiment(config, {sim_flags.threads});
            sim_flags.emit(export_report(report, sim_flags.export_format()));
        } else if (*scan) {
            const auto variant = parse_variant(scan_variant);
            if (!variant) throw UsageError("unknown variant '" + scan_variant + "'");
            const auto format = parse_format(scan_format);
            if (!format) throw UsageError("unknown format '" + scan_format + "'");
            const ScanResult result =
                scan_correlation(*variant, uniform_theta_grid(scan_points), scan_n, scan_seed, {scan_threads});
            std::cout << export_scan(result, *format);
        } else if (*inequalities) {
            ExperimentReport report = import_report(ExperimentFlags::read_file(counts_file));
            if (!ineq_angles.empty()) {
                ExperimentConfig c = report.config;
                c.quad = SettingQuadruple::planar(deg_to_rad(ineq_angles[0]), deg_to_rad(ineq_angles[1]),
                                                  deg_to_rad(ineq_angles[2]), deg_to_rad(ineq_angles[3]));
                report = make_report(c, report.counts);
            }
            print_inequalities(report);
        } else if (*threshold) {
            const ThresholdOptimum best = optimize_threshold(full_sphere);
            std::printf("threshold %.12f\n", best.threshold);
            std::printf("closed form 2/(1+sqrt(2)) = %.12f\n", 2.0 / (1.0 + std::sqrt(2.0)));
            std::printf("a  = %s\na' = %s\nb  = %s\nb' = %s\n", angle_of(best.quad.a).c_str(),
                        angle_of(best.quad.a_prime).c_str(), angle_of(best.quad.b).c_str(),
                        angle_of(best.quad.b_prime).c_str());
            std::printf("singlet CHSH value at optimum %.12f\n", quantum_chsh_value(best.quad));
        } else if (*referee) {
            net::SessionConfig session{session_id, ref_flags.resolve(referee)};
            net::Referee ref(net::Endpoint::parse(bind), {std::chrono::seconds(timeout_s), false});
            std::fprintf(stderr, "referee listening on port %u\n", static_cast<unsigned>(ref.port()));
            const auto outcome = ref.run(session);
            ref_flags.emit(export_report(outcome.report, ref_flags.export_format()));
        } else if (*node) {
            const auto role = parse_party(role_name);
            if (!role) throw UsageError("role must be alice or bob");
            net::NodeOptions options;
            options.timeout = std::chrono::seconds(timeout_s);
            const auto summary = net::node_run(*role, net::Endpoint::parse(connect), options);
            std::printf("%s session %llu: %llu records, %llu no-detections, checksum %016llx\n",
                        std::string(to_string(summary.role)).c_str(),
                        static_cast<unsigned long long>(summary.session_id),
                        static_cast<unsigned long long>(summary.records),
                        static_cast<unsigned long long>(summary.no_detections),
                        static_cast<unsigned long long>(summary.checksum));
        } else if (*selftest) {
            return run_selftest();
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
